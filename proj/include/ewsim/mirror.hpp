#pragma once

#include "ewsim/constants.hpp"
#include "ewsim/geometry.hpp"
#include "ewsim/species.hpp"

namespace ewsim {

// Exponential evanescent mirror: potential U0 exp(-2 kappa z) with photon
// scattering rate Gamma'(z) = U(z) * Gamma / (hbar delta1) and Raman pumping
// rate R(z) = branching_b * Gamma'(z).
class MirrorConfig {
 public:
  MirrorConfig(AtomSpecies species, InterfaceGeometry geom, double u0, double delta1,
               double branching_b, LaserLine line = LaserLine::d2);

  const AtomSpecies& species() const { return species_; }
  const InterfaceGeometry& geom() const { return geom_; }
  double u0() const { return u0_; }
  double delta1() const { return delta1_; }
  double branching_b() const { return branching_b_; }
  LaserLine line() const { return line_; }

  double kappa() const { return geom_.kappa(); }
  double linewidth() const { return species_.linewidth(line_); }
  // On-surface scattering and pump rates.
  double gamma_prime0() const {
    return u0_ * linewidth() / (constants::hbar * delta1_);
  }
  double raman0() const { return branching_b_ * gamma_prime0(); }

 private:
  AtomSpecies species_;
  InterfaceGeometry geom_;
  double u0_;
  double delta1_;
  double branching_b_;
  LaserLine line_;
};

// All three profiles require z >= 0 (vacuum side).
double potential(const MirrorConfig& cfg, double z);
double scatter_rate(const MirrorConfig& cfg, double z);
double raman_rate(const MirrorConfig& cfg, double z);

// Classical turning point ln(U0/E) / (2 kappa) for 0 < E <= U0. Throws
// MirrorOverrunError for E > U0.
double turning_point(const MirrorConfig& cfg, double energy);

// Closed-form Raman exposure integral R dt over a full bounce of an atom that
// enters with momentum p_entry at negligible potential: (R0/U0) p_entry/kappa.
double bounce_raman_exposure(const MirrorConfig& cfg, double p_entry);

// Expected photons scattered over the same full bounce: exposure / branching.
double expected_photons(const MirrorConfig& cfg, double p_entry);

// Pump-at-turning-point optimum of U0/R0 for entry momentum p: p / (2 kappa).
double optimal_ratio(double p_entry, double kappa);

// Detuning that realizes that optimum at fixed branching:
// delta = linewidth * branching * p / (2 hbar kappa).
double optimal_detuning(double linewidth, double branching_b, double p_entry, double kappa);

// Spatial scale of the turning-point wavefunction, kappa^-1 (hbar kappa/p)^{2/3}.
double turning_point_wavefunction_scale(double p_entry, double kappa);

}  // namespace ewsim
