#include "ewsim/budget.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ewsim/constants.hpp"

namespace ewsim {

void BudgetInput::validate() const {
  species.validate();
  if (!(delta1 > 0)) throw std::invalid_argument("BudgetInput: delta1 must be > 0");
  if (!(u1_ref > 0)) throw std::invalid_argument("BudgetInput: u1_ref must be > 0");
  if (!(impurity_eps >= 0) || impurity_eps >= 1)
    throw std::invalid_argument("BudgetInput: impurity_eps must be in [0, 1)");
  if (!(line_strength_d2_over_d1 > 0))
    throw std::invalid_argument("BudgetInput: line_strength_d2_over_d1 must be > 0");
}

BudgetInput default_budget_input() {
  BudgetInput in;
  in.delta1 = 2.0 * std::numbers::pi * 100e9;
  in.u1_ref = constants::h * 12e6;
  return in;
}

double crosstalk_rate(const BudgetInput& in) {
  in.validate();
  const double delta2 = in.delta1 + in.species.delta_ghf;
  const double u2 = in.u1_ref * in.delta1 / delta2;
  return in.species.gamma_d1 * u2 / (constants::hbar * delta2);
}

double dark_d2_rate(const BudgetInput& in) {
  in.validate();
  const double gap = in.species.delta_fs - in.delta1;
  if (!(gap > 0))
    throw std::domain_error("dark_d2_rate: delta1 must stay below the fine-structure splitting");
  const double u_d2 = in.u1_ref * (in.delta1 / gap) * in.line_strength_d2_over_d1;
  return in.species.gamma_d2 * u_d2 / (constants::hbar * gap);
}

double impurity_rate(const BudgetInput& in) {
  in.validate();
  return in.impurity_eps * kImpurityCgFactor * in.species.gamma_d1 * in.u1_ref /
         (constants::hbar * in.delta1);
}

double lattice_trap_frequency(const BudgetInput& in) {
  in.validate();
  const double u_trap =
      in.u1_ref * (in.delta1 / (in.delta1 + in.species.delta_ghf)) * kLatticeStrengthFactor;
  const double k_eff = std::numbers::sqrt2 * 2.0 * std::numbers::pi / in.species.lambda_d1;
  return k_eff * std::sqrt(2.0 * u_trap / in.species.mass);
}

double ho_wing_rate(double omega, const BudgetInput& in) {
  in.validate();
  if (!(omega > 0)) throw std::domain_error("ho_wing_rate: omega must be > 0");
  return omega * in.species.gamma_d1 / (4.0 * (in.delta1 + in.species.delta_ghf));
}

ScatteringBudget assemble_budget(const BudgetInput& in) {
  ScatteringBudget out;
  out.crosstalk_no_darkstate = crosstalk_rate(in);
  out.d2_offresonant = dark_d2_rate(in);
  out.d1_impurity = impurity_rate(in);
  out.trap_frequency = lattice_trap_frequency(in);
  out.ho_wing = ho_wing_rate(out.trap_frequency, in);
  out.total_dark = out.d2_offresonant + out.d1_impurity + out.ho_wing;
  return out;
}

std::vector<BudgetScanRow> detuning_scan(const BudgetInput& in, double delta_lo, double delta_hi,
                                         int n_points) {
  if (!(delta_lo > 0) || !(delta_hi > delta_lo))
    throw std::invalid_argument("detuning_scan: need 0 < delta_lo < delta_hi");
  if (n_points < 2) throw std::invalid_argument("detuning_scan: need at least 2 points");
  std::vector<BudgetScanRow> rows(n_points);
  const double step = std::log(delta_hi / delta_lo) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    BudgetInput pt = in;
    pt.delta1 = delta_lo * std::exp(step * i);
    rows[i].delta1 = pt.delta1;
    rows[i].budget = assemble_budget(pt);
  }
  return rows;
}

}  // namespace ewsim
