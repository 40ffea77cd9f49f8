#include "ewsim/molasses.hpp"

#include <cmath>
#include <stdexcept>

#include "ewsim/constants.hpp"

namespace ewsim {

void MolassesConfig::validate() const {
  if (!(temperature > 0)) throw std::invalid_argument("MolassesConfig: temperature must be > 0");
  if (!(sigma_z > 0)) throw std::invalid_argument("MolassesConfig: sigma_z must be > 0");
  if (!(drop_height > 0)) throw std::invalid_argument("MolassesConfig: drop_height must be > 0");
  if (n_atoms == 0) throw std::invalid_argument("MolassesConfig: n_atoms must be > 0");
}

double thermal_sigma_v(const AtomSpecies& species, double temperature) {
  if (!(temperature > 0)) throw std::domain_error("thermal_sigma_v: temperature must be > 0");
  return std::sqrt(constants::k_B * temperature / species.mass);
}

double nominal_entry_speed(double drop_height) {
  if (!(drop_height > 0)) throw std::domain_error("nominal_entry_speed: drop height must be > 0");
  return std::sqrt(2.0 * constants::g_earth * drop_height);
}

KinematicState sample_release(const MolassesConfig& cfg, const AtomSpecies& species,
                              TrajectoryRng& rng) {
  cfg.validate();
  const double sv = thermal_sigma_v(species, cfg.temperature);
  KinematicState s;
  s.z = cfg.drop_height + cfg.sigma_z * rng.normal();
  s.v = sv * rng.normal();
  s.t = 0;
  return s;
}

KinematicState free_fall_to_mirror(const KinematicState& release, double edge_height) {
  if (!(edge_height > 0)) throw std::domain_error("free_fall_to_mirror: edge height must be > 0");
  if (!(release.z >= edge_height))
    throw std::domain_error("free_fall_to_mirror: release point must not lie below the edge");
  const double g = constants::g_earth;
  const double disc = release.v * release.v + 2.0 * g * (release.z - edge_height);
  const double t_fall = (release.v + std::sqrt(disc)) / g;
  KinematicState s;
  s.z = edge_height;
  s.v = -std::sqrt(disc);
  s.t = release.t + t_fall;
  return s;
}

}  // namespace ewsim
