#pragma once

#include "ewsim/rng.hpp"
#include "ewsim/species.hpp"

namespace ewsim {

// Gaussian cloud released from optical molasses above the mirror. Positions
// are measured from the mirror surface, so drop_height is the cloud center.
struct MolassesConfig {
  double temperature = 10e-6;    // K
  double sigma_z = 0.2e-3;       // m, cloud rms radius at release
  double drop_height = 6e-3;     // m
  std::uint64_t n_atoms = 1'000'000;
  std::uint64_t master_seed = 0;  // per-trajectory streams derive from (seed, index)

  void validate() const;
};

// rms velocity spread along one axis, sqrt(kB T / m).
double thermal_sigma_v(const AtomSpecies& species, double temperature);

// Mean speed at the mirror after falling from rest at drop_height.
double nominal_entry_speed(double drop_height);

// Position/velocity draw at release; z is height above the mirror, v < 0 is
// toward it. t = 0.
KinematicState sample_release(const MolassesConfig& cfg, const AtomSpecies& species,
                              TrajectoryRng& rng);

// Ballistic flight from the release state down to the mirror-region edge at
// edge_height (> 0). Any launch velocity is allowed; from at or above the
// edge the atom always comes back down, arriving with
// v = -sqrt(v0^2 + 2 g (z0 - edge)). Throws std::domain_error on bad inputs.
KinematicState free_fall_to_mirror(const KinematicState& release, double edge_height);

}  // namespace ewsim
