#pragma once

#include <cstdint>
#include <functional>

#include "ewsim/mirror.hpp"
#include "ewsim/rng.hpp"
#include "ewsim/species.hpp"

namespace ewsim {

struct IntegrateOptions {
  // Max Raman exposure accumulated in one kernel substep; bounds the pump
  // localization error.
  double exposure_step_cap = 1e-3;
  // Max kappa * v_entry * dt per composite step; bounds the energy error.
  double accuracy_step_frac = 2e-3;
  // Include gravity inside the evanescent region (free fall above the entry
  // edge always includes it).
  bool gravity = false;
  // Integrate the full bounce without drawing a pump event (diagnostics).
  bool disable_pumping = false;
  std::uint64_t max_steps = 50'000'000;
  // Called after every composite step with (t, z, v, photon exposure).
  std::function<void(double, double, double, double)> observer;
};

struct BounceOutcome {
  bool pumped = false;
  double z_p = 0;                // m, pump position (valid when pumped)
  double v_p = 0;                // m/s, pump velocity (valid when pumped)
  double photons_scattered = 0;  // integral of Gamma' dt along the realized path
  double t_exit = 0;             // s from entry to pump or to exit at the entry edge
  double v_exit = 0;             // m/s at exit (equals v_p when pumped)
  double entry_speed = 0;        // m/s
  double max_energy_drift = 0;   // max |E(t) - E(0)| / E(0) seen at step boundaries
  std::uint64_t steps = 0;       // composite steps taken
};

// Integrate one bounce from `entry` (inside the region, moving toward the
// surface) until a Raman pump event or until the atom exits back through the
// entry height. The pump event is drawn by exposure inversion: one uniform
// draw u from `rng`, pump when the accumulated exposure reaches -ln(u).
// Throws MirrorOverrunError when the entry energy exceeds the barrier and
// IntegrationError on a step budget blowup.
BounceOutcome integrate_bounce(const MirrorConfig& cfg, const KinematicState& entry,
                               TrajectoryRng& rng, const IntegrateOptions& opts = {});

}  // namespace ewsim
