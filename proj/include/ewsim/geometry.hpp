#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ewsim {

// Dielectric/vacuum interface with a beam totally internally reflected inside
// the dielectric. Frame convention used everywhere: z is the outward surface
// normal, x the in-plane projection of the beam direction, y = z cross x.
class InterfaceGeometry {
 public:
  // theta_i in [critical angle, pi/2); construction below the critical angle
  // is rejected because the transmitted wave would propagate instead of decay.
  InterfaceGeometry(double n, double theta_i, double lambda0)
      : n_(n), theta_i_(theta_i), lambda0_(lambda0) {
    if (!(n > 1)) throw std::invalid_argument("InterfaceGeometry: refractive index must exceed 1");
    if (!(lambda0 > 0)) throw std::invalid_argument("InterfaceGeometry: vacuum wavelength must be > 0");
    const double theta_c = std::asin(1.0 / n);
    if (!(theta_i >= theta_c))
      throw std::invalid_argument(
          "InterfaceGeometry: theta_i below the critical angle; the evanescent regime "
          "requires n*sin(theta_i) >= 1");
    if (!(theta_i < std::numbers::pi / 2))
      throw std::invalid_argument("InterfaceGeometry: theta_i must be below pi/2");
  }

  double n() const { return n_; }
  double theta_i() const { return theta_i_; }
  double lambda0() const { return lambda0_; }

  static double critical_angle_for(double n) {
    if (!(n > 1)) throw std::invalid_argument("critical_angle_for: refractive index must exceed 1");
    return std::asin(1.0 / n);
  }

  double critical_angle() const { return std::asin(1.0 / n_); }
  double k_l() const { return 2.0 * std::numbers::pi / lambda0_; }

  // In-plane propagation constant in units of k_l; >= 1 in the TIR regime.
  double beta() const { return n_ * std::sin(theta_i_); }

  // Normal decay constant in units of k_l: sqrt(n^2 sin^2(theta_i) - 1).
  double gamma_norm() const {
    const double b = beta();
    return std::sqrt(std::max(b * b - 1.0, 0.0));
  }

  // Field decay constant kappa, 1/m. Intensity decays as exp(-2 kappa z).
  double kappa() const { return gamma_norm() * k_l(); }

 private:
  double n_;
  double theta_i_;
  double lambda0_;
};

inline double decay_constant(const InterfaceGeometry& g) { return g.kappa(); }

}  // namespace ewsim
