#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ewsim/constants.hpp"
#include "ewsim/species.hpp"

namespace ewsim {

// Momentum gained in a free fall from rest over drop_height: m*sqrt(2 g h).
inline double impact_momentum(const AtomSpecies& s, double drop_height) {
  if (!(drop_height >= 0)) throw std::domain_error("impact_momentum: drop_height must be >= 0");
  return s.mass * std::sqrt(2.0 * constants::g_earth * drop_height);
}

// Kinetic energy at the surface after the same fall: m g h.
inline double impact_energy(const AtomSpecies& s, double drop_height) {
  if (!(drop_height >= 0)) throw std::domain_error("impact_energy: drop_height must be >= 0");
  return s.mass * constants::g_earth * drop_height;
}

// The same momentum expressed in photon-recoil units hbar*k for the given
// vacuum wavelength.
inline double momentum_in_recoil_units(double momentum, double wavelength) {
  if (!(wavelength > 0))
    throw std::domain_error("momentum_in_recoil_units: wavelength must be > 0");
  return momentum * wavelength / (constants::hbar * 2.0 * std::numbers::pi);
}

// Temperature equivalent E / k_B of an energy.
inline double energy_as_temperature(double energy) { return energy / constants::k_B; }

// Frequency equivalent E / h of an energy (ordinary frequency, Hz).
inline double energy_as_frequency(double energy) { return energy / constants::h; }

// Single-photon recoil frequency hbar k^2 / (2 m), rad/s.
inline double recoil_frequency(const AtomSpecies& s, double wavelength) {
  if (!(wavelength > 0)) throw std::domain_error("recoil_frequency: wavelength must be > 0");
  const double k = 2.0 * std::numbers::pi / wavelength;
  return constants::hbar * k * k / (2.0 * s.mass);
}

// Lamb-Dicke parameter sqrt(omega_recoil / omega) for a trap of angular
// frequency omega.
inline double lamb_dicke(const AtomSpecies& s, double wavelength, double trap_omega) {
  if (!(trap_omega > 0)) throw std::domain_error("lamb_dicke: trap frequency must be > 0");
  return std::sqrt(recoil_frequency(s, wavelength) / trap_omega);
}

}  // namespace ewsim
