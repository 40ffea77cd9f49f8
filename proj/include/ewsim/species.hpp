#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace ewsim {

enum class LaserLine { d1, d2 };

// One alkali species. Angular frequencies throughout (rad/s).
struct AtomSpecies {
  std::string name;
  double mass = 0;        // kg
  double lambda_d1 = 0;   // m
  double lambda_d2 = 0;   // m
  double gamma_d1 = 0;    // rad/s, natural linewidth of the D1 line
  double gamma_d2 = 0;    // rad/s, natural linewidth of the D2 line
  double delta_ghf = 0;   // rad/s, ground-state hyperfine splitting
  double delta_fs = 0;    // rad/s, fine-structure (D1-D2) splitting

  double linewidth(LaserLine line) const {
    return line == LaserLine::d1 ? gamma_d1 : gamma_d2;
  }
  double wavelength(LaserLine line) const {
    return line == LaserLine::d1 ? lambda_d1 : lambda_d2;
  }

  // Throws std::invalid_argument naming the violated field.
  void validate() const {
    auto positive = [](double x, const char* field) {
      if (!(x > 0)) throw std::invalid_argument(std::string("AtomSpecies: ") + field + " must be > 0");
    };
    positive(mass, "mass");
    positive(lambda_d1, "lambda_d1");
    positive(lambda_d2, "lambda_d2");
    positive(gamma_d1, "gamma_d1");
    positive(gamma_d2, "gamma_d2");
    positive(delta_ghf, "delta_ghf");
    positive(delta_fs, "delta_fs");
    if (!(delta_fs > delta_ghf))
      throw std::invalid_argument("AtomSpecies: delta_fs must exceed delta_ghf");
    if (!(lambda_d1 > lambda_d2))
      throw std::invalid_argument("AtomSpecies: lambda_d1 must exceed lambda_d2");
  }
};

inline AtomSpecies rb87() {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  AtomSpecies s;
  s.name = "Rb-87";
  s.mass = 1.4432e-25;
  s.lambda_d1 = 795e-9;
  s.lambda_d2 = 780e-9;
  s.gamma_d1 = two_pi * 6.07e6;
  s.gamma_d2 = two_pi * 6.07e6;
  s.delta_ghf = two_pi * 6.8e9;
  s.delta_fs = two_pi * 7.2e12;
  return s;
}

// Position z is height above the mirror surface, v > 0 points away from it.
struct KinematicState {
  double z = 0;  // m
  double v = 0;  // m/s
  double t = 0;  // s
};

}  // namespace ewsim
