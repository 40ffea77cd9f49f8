#pragma once

#include <vector>

#include "ewsim/species.hpp"

namespace ewsim {

// Inputs for the trapped-atom photon-scattering budget. The light intensity
// is pinned by u1_ref, the F=1 light shift at the trap location, and held
// fixed across detuning scans (the intensity is assumed rescaled with
// delta1), which is the convention that keeps the trap depth constant.
struct BudgetInput {
  AtomSpecies species = rb87();
  double delta1 = 0;        // bouncer detuning from D1 for F=1, rad/s
  double u1_ref = 0;        // F=1 light shift at the trap location, J
  double impurity_eps = 1e-3;           // sigma-minus fraction of the D1 light
  double line_strength_d2_over_d1 = 2;  // relative D2:D1 coupling strength

  void validate() const;
};

// Defaults match the reference operating point: 100 GHz detuning, 12 MHz
// trap-location light shift.
BudgetInput default_budget_input();

struct ScatteringBudget {
  double crosstalk_no_darkstate = 0;  // F=2 atom scattering bouncer light, s^-1
  double d2_offresonant = 0;          // dark state via the D2 line, s^-1
  double d1_impurity = 0;             // dark state via polarization impurity, s^-1
  double ho_wing = 0;                 // dark state via wavefunction spread, s^-1
  double trap_frequency = 0;          // lattice harmonic frequency, rad/s
  double total_dark = 0;              // sum of the three dark-state channels
};

// Per-channel closed forms. All use the far-detuned two-level scattering
// form rate = Gamma * U / (hbar * delta).

// F=2 atom in the bouncer light, no dark state: same intensity as F=1, but
// detuning delta2 = delta1 + delta_ghf.
double crosstalk_rate(const BudgetInput& in);

// Dark-state residual through the D2 line, detuned by delta_fs - delta1.
// Requires delta1 < delta_fs.
double dark_d2_rate(const BudgetInput& in);

// Dark-state residual from a sigma-minus admixture eps in the D1 light.
// The Clebsch-Gordan scalar folds the trap-location intensity for F=2 and
// the relevant line strengths into one calibrated, frozen constant.
double impurity_rate(const BudgetInput& in);

// Harmonic frequency of the sigma-minus lattice about a node,
// omega = k_eff * sqrt(2 U_trap / m), lattice period lambda_D1/sqrt(2).
double lattice_trap_frequency(const BudgetInput& in);

// Dark-state residual from the harmonic-oscillator ground-state wings
// sampling the trapping light: omega * Gamma / (4 (delta1 + delta_ghf)).
double ho_wing_rate(double omega, const BudgetInput& in);

ScatteringBudget assemble_budget(const BudgetInput& in);

struct BudgetScanRow {
  double delta1 = 0;  // rad/s
  ScatteringBudget budget;
};

// Evaluate the budget on a log-spaced detuning grid, holding the other
// inputs fixed.
std::vector<BudgetScanRow> detuning_scan(const BudgetInput& in, double delta_lo, double delta_hi,
                                         int n_points);

// Calibrated channel scalars, frozen as regression values.
inline constexpr double kImpurityCgFactor = 2.316093351;
inline constexpr double kLatticeStrengthFactor = 0.705695321362;

}  // namespace ewsim
