#pragma once

#include <cstdint>

#include "ewsim/bounce.hpp"
#include "ewsim/histogram.hpp"
#include "ewsim/mirror.hpp"
#include "ewsim/molasses.hpp"

namespace ewsim {

struct EnsembleOptions {
  int threads = 1;            // 0 = one per hardware thread
  double entry_margin = 2.5;  // mirror-region edge at entry_margin / kappa
  IntegrateOptions integrate;
};

// Scalar summary of one ensemble run. Fractions are over n_requested and the
// unpumped fraction is defined as 1 - pumped - overrun so the three always
// sum to exactly 1. Peaks are dimensionless phase-space densities on the
// v = 0 cut; compression_factor = peak_final / peak_initial.
struct CompressionReport {
  std::uint64_t n_requested = 0;
  std::uint64_t n_pumped = 0;
  std::uint64_t n_unpumped = 0;
  std::uint64_t n_overrun = 0;
  double pumped_fraction = 0;
  double unpumped_fraction = 0;
  double overrun_fraction = 0;
  double mean_photons_scattered = 0;  // per non-overrun trajectory, truncated at the pump
  double peak_initial = 0;            // analytic Gaussian peak of the release cloud
  double peak_final = 0;
  double compression_factor = 0;
  double peak_z = 0;                  // refined abscissa of the final peak, m
  double width_z_at_v0 = 0;           // FWHM of the v = 0 cut, m (0 if not resolved)
  bool no_pumped_warning = false;     // set when no trajectory was pumped
};

struct EnsembleResult {
  PhaseSpaceHistogram hist;
  CompressionReport report;
};

// Default map: nz x nv bins over [0, entry_margin/kappa] x [-v_i, v_i] with
// v_i the nominal entry speed for the configured drop.
BinningSpec default_binning(const MirrorConfig& mirror, const MolassesConfig& mol,
                            double entry_margin = 2.5, int nz = 64, int nv = 64);

// Sample the release cloud, fall to the mirror edge, bounce each atom once,
// and histogram the pump coordinates. Per-trajectory RNG streams derive from
// (master_seed, index), and per-block partial results are folded in index
// order, so the output is identical for any thread count.
EnsembleResult run_ensemble(const MolassesConfig& mol, const MirrorConfig& mirror,
                            const BinningSpec& bins, const EnsembleOptions& opts = {});

// Expected pump-position distribution over the same binning. mass holds the
// per-bin pump probability summed over trajectories, so mass / n_total is the
// expected histogram fill and density() matches PhaseSpaceHistogram::density.
struct ExpectedPumpDensity {
  BinningSpec spec;
  std::vector<double> mass;  // iz * nv + iv
  std::uint64_t n_total = 0;
  double pumped_mass = 0;    // total pump probability, inside the map or not

  double density(int iz, int iv, double h_over_m) const;
  // Same v = 0 convention as PhaseSpaceHistogram::v0_row.
  std::vector<double> v0_density(double h_over_m) const;
};

// Integrate every trajectory without drawing a pump time and deposit, per
// integration step, the probability that the pump falls inside that step (the
// survival drop across it) at the step midpoint. The pump-time draw is
// integrated out exactly, so at fixed seed the result varies smoothly with
// the mirror parameters; the peak optimizer uses this as its objective.
// Release sampling and determinism follow the run_ensemble contract.
ExpectedPumpDensity expected_pump_density(const MolassesConfig& mol, const MirrorConfig& mirror,
                                          const BinningSpec& bins,
                                          const EnsembleOptions& opts = {});

}  // namespace ewsim
