#include "ewsim/mirror.hpp"

#include <cmath>
#include <stdexcept>

#include "ewsim/errors.hpp"

namespace ewsim {

MirrorConfig::MirrorConfig(AtomSpecies species, InterfaceGeometry geom, double u0,
                           double delta1, double branching_b, LaserLine line)
    : species_(std::move(species)),
      geom_(geom),
      u0_(u0),
      delta1_(delta1),
      branching_b_(branching_b),
      line_(line) {
  species_.validate();
  if (!(u0_ > 0)) throw std::invalid_argument("MirrorConfig: u0 must be > 0");
  if (!(delta1_ > 0)) throw std::invalid_argument("MirrorConfig: delta1 must be > 0");
  if (!(branching_b_ > 0 && branching_b_ <= 1))
    throw std::invalid_argument("MirrorConfig: branching_b must lie in (0, 1]");
}

namespace {
double checked_falloff(const MirrorConfig& cfg, double z, const char* who) {
  if (!(z >= 0)) throw std::domain_error(std::string(who) + ": z must be >= 0");
  return std::exp(-2.0 * cfg.kappa() * z);
}
}  // namespace

double potential(const MirrorConfig& cfg, double z) {
  return cfg.u0() * checked_falloff(cfg, z, "potential");
}

double scatter_rate(const MirrorConfig& cfg, double z) {
  return cfg.gamma_prime0() * checked_falloff(cfg, z, "scatter_rate");
}

double raman_rate(const MirrorConfig& cfg, double z) {
  return cfg.raman0() * checked_falloff(cfg, z, "raman_rate");
}

double turning_point(const MirrorConfig& cfg, double energy) {
  if (!(energy > 0)) throw std::domain_error("turning_point: energy must be > 0");
  if (energy > cfg.u0())
    throw MirrorOverrunError("turning_point: incident energy exceeds barrier height U0");
  return std::log(cfg.u0() / energy) / (2.0 * cfg.kappa());
}

double bounce_raman_exposure(const MirrorConfig& cfg, double p_entry) {
  if (!(p_entry > 0)) throw std::domain_error("bounce_raman_exposure: momentum must be > 0");
  return cfg.raman0() / cfg.u0() * p_entry / cfg.kappa();
}

double expected_photons(const MirrorConfig& cfg, double p_entry) {
  return bounce_raman_exposure(cfg, p_entry) / cfg.branching_b();
}

double optimal_ratio(double p_entry, double kappa) {
  if (!(p_entry > 0) || !(kappa > 0))
    throw std::domain_error("optimal_ratio: momentum and kappa must be > 0");
  return p_entry / (2.0 * kappa);
}

double optimal_detuning(double linewidth, double branching_b, double p_entry, double kappa) {
  if (!(linewidth > 0) || !(branching_b > 0) || !(p_entry > 0) || !(kappa > 0))
    throw std::domain_error("optimal_detuning: all arguments must be > 0");
  return linewidth * branching_b * p_entry / (2.0 * constants::hbar * kappa);
}

double turning_point_wavefunction_scale(double p_entry, double kappa) {
  if (!(p_entry > 0) || !(kappa > 0))
    throw std::domain_error("turning_point_wavefunction_scale: arguments must be > 0");
  return std::cbrt(std::pow(constants::hbar * kappa / p_entry, 2.0)) / kappa;
}

}  // namespace ewsim
