#include "ewsim/optimize.hpp"

#include <cmath>
#include <stdexcept>

#include "ewsim/constants.hpp"

namespace ewsim {

namespace {

std::vector<double> smooth_row(const std::vector<double>& row, double sigma_bins) {
  if (!(sigma_bins > 0) || row.empty()) return row;
  const int radius = static_cast<int>(std::ceil(4.0 * sigma_bins));
  std::vector<double> kernel(2 * radius + 1);
  double norm = 0;
  for (int k = -radius; k <= radius; ++k) {
    kernel[k + radius] = std::exp(-0.5 * (k / sigma_bins) * (k / sigma_bins));
    norm += kernel[k + radius];
  }
  std::vector<double> out(row.size(), 0.0);
  const int n = static_cast<int>(row.size());
  for (int i = 0; i < n; ++i) {
    double acc = 0;
    for (int k = -radius; k <= radius; ++k) {
      const int j = i + k;
      if (j >= 0 && j < n) acc += kernel[k + radius] * row[j];
    }
    out[i] = acc / norm;
  }
  return out;
}

constexpr double kInvPhi = 0.61803398874989485;

}  // namespace

MirrorConfig apply_free_param(const MirrorConfig& tmpl, FreeParam which, double value) {
  if (!(value > 0)) throw std::domain_error("apply_free_param: parameter value must be > 0");
  switch (which) {
    case FreeParam::pump_ratio: {
      // U0/R0 = hbar * delta1 / (Gamma * b); realize the ratio through b.
      const double b = constants::hbar * tmpl.delta1() / (tmpl.linewidth() * value);
      if (!(b > 0) || b > 1.0)
        throw std::domain_error(
            "apply_free_param: pump ratio not realizable, branching ratio would leave (0, 1]");
      return MirrorConfig(tmpl.species(), tmpl.geom(), tmpl.u0(), tmpl.delta1(), b, tmpl.line());
    }
    case FreeParam::detuning:
      return MirrorConfig(tmpl.species(), tmpl.geom(), tmpl.u0(), value, tmpl.branching_b(),
                          tmpl.line());
    case FreeParam::decay_constant: {
      const InterfaceGeometry& g = tmpl.geom();
      const double ratio = value / g.k_l();  // kappa / k_L
      const double sin_theta = std::sqrt(ratio * ratio + 1.0) / g.n();
      if (sin_theta > 1.0)
        throw std::domain_error(
            "apply_free_param: decay constant exceeds the grazing-incidence maximum");
      InterfaceGeometry ng(g.n(), std::asin(sin_theta), g.lambda0());
      return MirrorConfig(tmpl.species(), ng, tmpl.u0(), tmpl.delta1(), tmpl.branching_b(),
                          tmpl.line());
    }
  }
  throw std::logic_error("apply_free_param: unknown parameter");
}

double read_free_param(const MirrorConfig& cfg, FreeParam which) {
  switch (which) {
    case FreeParam::pump_ratio:
      return cfg.u0() / cfg.raman0();
    case FreeParam::detuning:
      return cfg.delta1();
    case FreeParam::decay_constant:
      return cfg.kappa();
  }
  throw std::logic_error("read_free_param: unknown parameter");
}

OptimizeResult optimize_peak(const MolassesConfig& mol, const MirrorConfig& tmpl,
                             const std::vector<FreeParam>& free_params,
                             const std::vector<ParamBounds>& bounds,
                             const OptimizeOptions& opts) {
  if (free_params.empty() || free_params.size() > 2)
    throw std::invalid_argument("optimize_peak: one or two free parameters required");
  if (bounds.size() != free_params.size())
    throw std::invalid_argument("optimize_peak: one bounds pair per free parameter");
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    if (!(bounds[i].lo > 0) || !(bounds[i].hi >= bounds[i].lo))
      throw std::invalid_argument("optimize_peak: bounds must satisfy 0 < lo <= hi");
    apply_free_param(tmpl, free_params[i], bounds[i].lo);   // realizability check
    apply_free_param(tmpl, free_params[i], bounds[i].hi);
  }

  MolassesConfig mc = mol;
  mc.n_atoms = opts.n_atoms;

  EnsembleOptions eopts;
  eopts.threads = opts.threads;

  OptimizeResult result;
  result.params = free_params;
  result.best.resize(free_params.size());
  for (std::size_t i = 0; i < free_params.size(); ++i)
    result.best[i] = std::sqrt(bounds[i].lo * bounds[i].hi);

  auto build_config = [&](const std::vector<double>& values) {
    MirrorConfig cfg = tmpl;
    for (std::size_t i = 0; i < free_params.size(); ++i)
      cfg = apply_free_param(cfg, free_params[i], values[i]);
    return cfg;
  };

  auto objective = [&](const std::vector<double>& values) {
    const MirrorConfig cfg = build_config(values);
    const ExpectedPumpDensity d = expected_pump_density(mc, cfg, default_binning(cfg, mc), eopts);
    const auto row = smooth_row(d.v0_density(constants::h / cfg.species().mass),
                                opts.smooth_sigma_bins);
    ++result.evaluations;
    return refine_peak(row, d.spec.z_min, d.spec.dz()).value;
  };

  std::vector<double> values = result.best;
  double best_f = objective(values);

  const int cycles = free_params.size() == 1 ? 1 : std::max(1, opts.cycles);
  for (int cycle = 0; cycle < cycles; ++cycle) {
    for (std::size_t i = 0; i < free_params.size(); ++i) {
      if (bounds[i].hi == bounds[i].lo) {
        values[i] = bounds[i].lo;
        continue;
      }
      double a = std::log(bounds[i].lo), b = std::log(bounds[i].hi);
      double c = b - kInvPhi * (b - a);
      double d = a + kInvPhi * (b - a);
      auto eval_at = [&](double t) {
        values[i] = std::exp(t);
        return objective(values);
      };
      double fc = eval_at(c);
      double fd = eval_at(d);
      while (b - a > opts.ln_tolerance && result.evaluations < opts.max_evals) {
        if (fc > fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - kInvPhi * (b - a);
          fc = eval_at(c);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + kInvPhi * (b - a);
          fd = eval_at(d);
        }
      }
      const double t_best = fc > fd ? c : d;
      values[i] = std::exp(t_best);
      best_f = std::max(fc, fd);
      if (t_best - std::log(bounds[i].lo) <= opts.ln_tolerance) result.hit_lower_bound = true;
      if (std::log(bounds[i].hi) - t_best <= opts.ln_tolerance) result.hit_upper_bound = true;
    }
  }

  result.best = values;
  result.best_objective = best_f;
  const MirrorConfig cfg = build_config(values);
  result.report = run_ensemble(mc, cfg, default_binning(cfg, mc), eopts).report;
  return result;
}

}  // namespace ewsim
