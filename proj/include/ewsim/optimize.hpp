#pragma once

#include <cstdint>
#include <vector>

#include "ewsim/ensemble.hpp"

namespace ewsim {

// Mirror parameters the peak optimizer may vary. pump_ratio is U0/R0 (J s),
// realized by adjusting the branching ratio at fixed U0 and detuning;
// detuning is delta1 (rad/s) at fixed branching; decay_constant is kappa
// (1/m), realized through the incidence angle at fixed n and wavelength.
enum class FreeParam { pump_ratio, detuning, decay_constant };

struct ParamBounds {
  double lo = 0, hi = 0;
};

struct OptimizeOptions {
  std::uint64_t n_atoms = 20'000;  // per objective evaluation
  int threads = 1;
  double ln_tolerance = 0.04;      // golden-section window in ln(parameter)
  int max_evals = 120;
  double smooth_sigma_bins = 1.0;  // Gaussian smoothing of the v = 0 cut
  int cycles = 2;                  // coordinate passes when two parameters are free
};

struct OptimizeResult {
  std::vector<FreeParam> params;
  std::vector<double> best;        // same order as params
  double best_objective = 0;       // smoothed peak density at the best point
  bool hit_lower_bound = false;
  bool hit_upper_bound = false;
  int evaluations = 0;
  CompressionReport report;        // unsmoothed report at the best point
};

// Build a copy of the template with one parameter replaced. Throws
// std::domain_error if the value cannot be realized (e.g. a pump ratio that
// would need a branching ratio above 1).
MirrorConfig apply_free_param(const MirrorConfig& tmpl, FreeParam which, double value);

// Current value of a parameter in a config, the inverse of apply_free_param.
double read_free_param(const MirrorConfig& cfg, FreeParam which);

// Maximize the smoothed peak of the v = 0 phase-space-density cut by
// coordinate-wise golden-section search in ln(parameter). Every evaluation
// reuses the same master seed (common random numbers) and estimates the cut
// with expected_pump_density, which integrates the pump-time draw out, so the
// objective is a deterministic, smooth function of the parameters. One or two
// free parameters; bounds must be realizable at both ends. Degenerate bounds
// (lo == hi) pin the parameter. The returned report comes from a standard
// sampled run at the best point.
OptimizeResult optimize_peak(const MolassesConfig& mol, const MirrorConfig& tmpl,
                             const std::vector<FreeParam>& free_params,
                             const std::vector<ParamBounds>& bounds,
                             const OptimizeOptions& opts = {});

}  // namespace ewsim
