#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "csvio.hpp"
#include "manifest.hpp"
#include "ewsim/bounce.hpp"
#include "ewsim/constants.hpp"
#include "ewsim/errors.hpp"
#include "ewsim/kinematics.hpp"
#include "ewsim/optimize.hpp"
#include "ewsim/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using namespace ewsim;
using namespace ewsim::cli;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;  // section.key=value
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = -1;  // -1: keep config value
};

RunConfig make_config(const CommonArgs& args) {
  RunConfig cfg = args.config_path.empty() ? RunConfig() : RunConfig::load(args.config_path);
  for (const std::string& ov : args.overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--set expects section.key=value, got '" + ov + "'");
    cfg.set(ov.substr(0, eq), ov.substr(eq + 1));
  }
  if (args.seed_given) cfg.set("run.seed", std::to_string(args.seed));
  if (args.threads >= 0) cfg.set("run.threads", std::to_string(args.threads));
  return cfg;
}

std::string resolve_out_dir(const CommonArgs& args) {
  std::string dir = args.out_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("EWSIM_OUT")) dir = env;
    if (dir.empty()) dir = ".";
  }
  fs::create_directories(dir);
  return dir;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << j.dump(2) << "\n";
}

json report_to_json(const CompressionReport& rep) {
  json j;
  j["n_requested"] = rep.n_requested;
  j["n_pumped"] = rep.n_pumped;
  j["n_unpumped"] = rep.n_unpumped;
  j["n_overrun"] = rep.n_overrun;
  j["pumped_fraction"] = rep.pumped_fraction;
  j["unpumped_fraction"] = rep.unpumped_fraction;
  j["overrun_fraction"] = rep.overrun_fraction;
  j["mean_photons_scattered"] = rep.mean_photons_scattered;
  j["peak_initial"] = rep.peak_initial;
  j["peak_final"] = rep.peak_final;
  j["compression_factor"] = rep.compression_factor;
  j["peak_z"] = rep.peak_z;
  j["width_z_at_v0"] = rep.width_z_at_v0;
  j["no_pumped_warning"] = rep.no_pumped_warning;
  return j;
}

std::vector<std::string> run_field(const RunConfig& cfg, const std::string& out_dir) {
  const InterfaceGeometry g = cfg.geometry();
  const double angle = cfg.crossing_angle();
  const int grid = cfg.field_grid();
  if (grid < 1) throw std::invalid_argument("crossing.grid_n must be >= 1");
  const std::array<BeamMode, 2> modes{BeamMode::te, cfg.second_beam_mode()};

  // One in-plane optical period along x, one full circularity period along y.
  const double lx = g.lambda0() / g.beta();
  const double ly = 2.0 * sigma_line_spacing(g, angle);
  std::vector<std::array<double, 2>> points;
  points.reserve(static_cast<std::size_t>(grid) * grid);
  for (int iy = 0; iy < grid; ++iy)
    for (int ix = 0; ix < grid; ++ix)
      points.push_back({lx * ix / grid, ly * iy / grid});

  const auto fields = te_crossing_pattern(g, angle, points, modes);
  std::vector<std::vector<double>> rows;
  rows.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto s = fields[i].stokes_xy();
    rows.push_back({points[i][0], points[i][1], fields[i].intensity(), s[0], s[1], s[2]});
  }
  write_table_csv(out_dir + "/field.csv", {"x", "y", "I", "s1", "s2", "s3"}, rows);
  return {"field.csv"};
}

std::vector<std::string> run_bounce(const RunConfig& cfg, const std::string& out_dir) {
  const MirrorConfig mirror = cfg.mirror();
  const MolassesConfig mol = cfg.molasses();
  const double edge = cfg.entry_margin() / mirror.kappa();
  const KinematicState entry = free_fall_to_mirror({mol.drop_height, 0.0, 0.0}, edge);

  std::vector<std::vector<double>> rows;
  rows.push_back({0.0, entry.z, entry.v, 0.0});
  IntegrateOptions opts;
  const double b = mirror.branching_b();
  opts.observer = [&](double t, double z, double v, double y) {
    rows.push_back({t, z, v, b * y});
  };
  TrajectoryRng rng(mol.master_seed, 0);
  const BounceOutcome out = integrate_bounce(mirror, entry, rng, opts);

  write_table_csv(out_dir + "/bounce.csv", {"t", "z", "v", "raman_exposure"}, rows);
  json j;
  j["pumped"] = out.pumped;
  if (out.pumped) {
    j["z_p"] = out.z_p;
    j["v_p"] = out.v_p;
  }
  j["photons_scattered"] = out.photons_scattered;
  j["t_exit"] = out.t_exit;
  j["v_exit"] = out.v_exit;
  j["entry_speed"] = out.entry_speed;
  j["max_energy_drift"] = out.max_energy_drift;
  j["steps"] = out.steps;
  write_json_file(out_dir + "/bounce.json", j);
  return {"bounce.csv", "bounce.json"};
}

std::vector<std::string> run_mc(const RunConfig& cfg, const std::string& out_dir) {
  const MirrorConfig mirror = cfg.mirror();
  const MolassesConfig mol = cfg.molasses();
  const BinningSpec bins = cfg.binning();
  const EnsembleResult res = run_ensemble(mol, mirror, bins, cfg.ensemble_options());

  const double h_over_m = constants::h / mirror.species().mass;
  std::vector<double> v_centers(bins.nv), z_centers(bins.nz);
  for (int iv = 0; iv < bins.nv; ++iv) v_centers[iv] = bins.v_center(iv);
  for (int iz = 0; iz < bins.nz; ++iz) z_centers[iz] = bins.z_center(iz);
  std::vector<std::vector<double>> cells(bins.nz, std::vector<double>(bins.nv));
  for (int iz = 0; iz < bins.nz; ++iz)
    for (int iv = 0; iv < bins.nv; ++iv) cells[iz][iv] = res.hist.density(iz, iv, h_over_m);
  write_matrix_csv(out_dir + "/hist.csv", "z", v_centers, z_centers, cells);

  json j = report_to_json(res.report);
  j["binning"] = {{"nz", bins.nz},  {"nv", bins.nv},  {"z_min", bins.z_min},
                  {"z_max", bins.z_max}, {"v_min", bins.v_min}, {"v_max", bins.v_max}};
  j["seed"] = cfg.seed();
  write_json_file(out_dir + "/report.json", j);
  return {"hist.csv", "report.json"};
}

json budget_to_json(const ScatteringBudget& b) {
  json j;
  j["crosstalk_no_darkstate"] = b.crosstalk_no_darkstate;
  j["d2_offresonant"] = b.d2_offresonant;
  j["d1_impurity"] = b.d1_impurity;
  j["ho_wing"] = b.ho_wing;
  j["trap_frequency"] = b.trap_frequency;
  j["total_dark"] = b.total_dark;
  return j;
}

std::vector<std::string> run_budget(const RunConfig& cfg, const std::string& out_dir) {
  const BudgetInput in = cfg.budget();
  json j = budget_to_json(assemble_budget(in));
  j["inputs"] = {{"delta1", in.delta1},
                 {"u1_ref", in.u1_ref},
                 {"impurity_eps", in.impurity_eps},
                 {"line_strength_d2_over_d1", in.line_strength_d2_over_d1}};
  write_json_file(out_dir + "/budget.json", j);

  const auto scan = detuning_scan(in, cfg.get_double("budget.scan_lo"),
                                  cfg.get_double("budget.scan_hi"),
                                  cfg.get_int("budget.scan_points"));
  std::vector<std::vector<double>> rows;
  rows.reserve(scan.size());
  for (const auto& r : scan)
    rows.push_back({r.delta1 / (2.0 * std::numbers::pi), r.budget.crosstalk_no_darkstate,
                    r.budget.d2_offresonant, r.budget.d1_impurity, r.budget.ho_wing,
                    r.budget.total_dark});
  write_table_csv(out_dir + "/budget_scan.csv",
                  {"delta1_Hz", "crosstalk", "d2", "impurity", "ho", "total"}, rows);
  return {"budget.json", "budget_scan.csv"};
}

struct SweepArgs {
  std::string param;
  double from = 0, to = 0;
  int steps = 0;
  std::string metrics = "auto";
};

std::vector<std::string> run_sweep(const RunConfig& base, const SweepArgs& sw,
                                   const std::string& out_dir) {
  if (sw.steps < 1) throw std::invalid_argument("sweep: --steps must be >= 1");
  std::string metrics = sw.metrics;
  if (metrics == "auto") metrics = sw.param.rfind("budget.", 0) == 0 ? "budget" : "mc";
  if (metrics != "mc" && metrics != "budget")
    throw std::invalid_argument("sweep: --metrics must be auto, mc, or budget");

  std::vector<std::string> columns;
  if (metrics == "mc")
    columns = {sw.param, "pumped_fraction", "peak_final", "compression_factor",
               "width_z_at_v0", "mean_photons_scattered"};
  else
    columns = {sw.param, "crosstalk", "d2", "impurity", "ho", "total"};

  std::vector<std::vector<double>> rows;
  for (int i = 0; i < sw.steps; ++i) {
    const double x =
        sw.steps == 1 ? sw.from : sw.from + (sw.to - sw.from) * i / (sw.steps - 1);
    RunConfig cfg = base;
    cfg.set(sw.param, format_double(x));
    if (metrics == "mc") {
      const auto res =
          run_ensemble(cfg.molasses(), cfg.mirror(), cfg.binning(), cfg.ensemble_options());
      rows.push_back({x, res.report.pumped_fraction, res.report.peak_final,
                      res.report.compression_factor, res.report.width_z_at_v0,
                      res.report.mean_photons_scattered});
    } else {
      const auto b = assemble_budget(cfg.budget());
      rows.push_back({x, b.crosstalk_no_darkstate, b.d2_offresonant, b.d1_impurity, b.ho_wing,
                      b.total_dark});
    }
  }
  write_table_csv(out_dir + "/sweep.csv", columns, rows);
  return {"sweep.csv"};
}

struct OptimizeArgs {
  std::vector<std::string> free_names;
  std::vector<double> lo, hi;
  std::uint64_t n_atoms = 20'000;
  double ln_tol = 0.04;
  int max_evals = 120;
  double smooth = 1.0;
};

FreeParam parse_free_param(const std::string& name) {
  if (name == "ratio") return FreeParam::pump_ratio;
  if (name == "delta1") return FreeParam::detuning;
  if (name == "kappa") return FreeParam::decay_constant;
  throw std::invalid_argument("optimize: --free must be ratio, delta1, or kappa, got '" + name +
                              "'");
}

std::vector<std::string> run_optimize(const RunConfig& cfg, const OptimizeArgs& oa,
                                      const std::string& out_dir) {
  if (oa.free_names.empty() || oa.free_names.size() > 2)
    throw std::invalid_argument("optimize: give one or two --free parameters");
  if (oa.lo.size() != oa.free_names.size() || oa.hi.size() != oa.free_names.size())
    throw std::invalid_argument("optimize: need one --lo and one --hi per --free");

  std::vector<FreeParam> params;
  std::vector<ParamBounds> bounds;
  for (std::size_t i = 0; i < oa.free_names.size(); ++i) {
    params.push_back(parse_free_param(oa.free_names[i]));
    bounds.push_back({oa.lo[i], oa.hi[i]});
  }

  OptimizeOptions opts;
  opts.n_atoms = oa.n_atoms;
  opts.threads = cfg.threads();
  opts.ln_tolerance = oa.ln_tol;
  opts.max_evals = oa.max_evals;
  opts.smooth_sigma_bins = oa.smooth;

  const OptimizeResult res = optimize_peak(cfg.molasses(), cfg.mirror(), params, bounds, opts);

  json j;
  j["free_params"] = oa.free_names;
  j["best"] = res.best;
  j["best_objective"] = res.best_objective;
  j["hit_lower_bound"] = res.hit_lower_bound;
  j["hit_upper_bound"] = res.hit_upper_bound;
  j["evaluations"] = res.evaluations;
  j["report"] = report_to_json(res.report);
  write_json_file(out_dir + "/optimize.json", j);
  return {"optimize.json"};
}

const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const MirrorOverrunError*>(&e)) return "mirror_overrun";
  if (dynamic_cast<const IntegrationError*>(&e)) return "integration_failure";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "invalid_argument";
  if (dynamic_cast<const std::domain_error*>(&e)) return "domain_error";
  if (dynamic_cast<const std::out_of_range*>(&e)) return "out_of_range";
  return "runtime_error";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evanescent-wave mirror simulator: inelastic atom bouncing, phase-space "
               "compression Monte Carlo, polarization field maps, and photon-scattering "
               "budgets"};
  app.require_subcommand(1);

  CommonArgs common;
  app.add_option("--config", common.config_path, "Run configuration file (INI)");
  app.add_option("--seed", common.seed, "Master RNG seed (overrides run.seed)")
      ->each([&](const std::string&) { common.seed_given = true; });
  app.add_option("--out", common.out_dir,
                 "Output directory (default: $EWSIM_OUT or current directory)");
  app.add_option("--threads", common.threads, "Worker threads, 0 = auto (overrides run.threads)");
  app.add_option("--set", common.overrides, "Override a config value, section.key=value")
      ->take_all();

  CLI::App* c_field = app.add_subcommand("field", "Evanescent polarization pattern map (CSV)");
  CLI::App* c_bounce = app.add_subcommand("bounce", "Single bounce trajectory (CSV + JSON)");
  CLI::App* c_mc = app.add_subcommand("mc", "Phase-space compression Monte Carlo");
  CLI::App* c_budget = app.add_subcommand("budget", "Photon-scattering budget (JSON + scan CSV)");
  CLI::App* c_sweep = app.add_subcommand("sweep", "Scan one config parameter");
  CLI::App* c_opt = app.add_subcommand("optimize", "Maximize the phase-space peak");
  for (CLI::App* sub : {c_field, c_bounce, c_mc, c_budget, c_sweep, c_opt}) sub->fallthrough();

  SweepArgs sweep_args;
  c_sweep->add_option("--param", sweep_args.param, "Config key to sweep (section.key)")
      ->required();
  c_sweep->add_option("--from", sweep_args.from, "First value")->required();
  c_sweep->add_option("--to", sweep_args.to, "Last value")->required();
  c_sweep->add_option("--steps", sweep_args.steps, "Number of points (>= 1)")->required();
  c_sweep->add_option("--metrics", sweep_args.metrics, "auto | mc | budget");

  OptimizeArgs opt_args;
  c_opt->add_option("--free", opt_args.free_names, "Free parameter: ratio | delta1 | kappa")
      ->take_all();
  c_opt->add_option("--lo", opt_args.lo, "Lower bound(s), same order as --free")->take_all();
  c_opt->add_option("--hi", opt_args.hi, "Upper bound(s), same order as --free")->take_all();
  c_opt->add_option("--n-atoms", opt_args.n_atoms, "Trajectories per objective evaluation");
  c_opt->add_option("--ln-tol", opt_args.ln_tol, "Golden-section window in ln(parameter)");
  c_opt->add_option("--max-evals", opt_args.max_evals, "Objective evaluation budget");
  c_opt->add_option("--smooth", opt_args.smooth, "Gaussian smoothing of the v=0 cut, in bins");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = make_config(common);
    const std::string out_dir = resolve_out_dir(common);

    RunManifest manifest;
    manifest.config_hash = cfg.hash();
    manifest.seed = cfg.seed();
    manifest.threads = cfg.threads();
    manifest.started_utc = utc_timestamp_now();

    if (app.got_subcommand(c_field)) {
      manifest.subcommand = "field";
      manifest.outputs = run_field(cfg, out_dir);
    } else if (app.got_subcommand(c_bounce)) {
      manifest.subcommand = "bounce";
      manifest.outputs = run_bounce(cfg, out_dir);
    } else if (app.got_subcommand(c_mc)) {
      manifest.subcommand = "mc";
      manifest.outputs = run_mc(cfg, out_dir);
    } else if (app.got_subcommand(c_budget)) {
      manifest.subcommand = "budget";
      manifest.outputs = run_budget(cfg, out_dir);
    } else if (app.got_subcommand(c_sweep)) {
      manifest.subcommand = "sweep";
      manifest.outputs = run_sweep(cfg, sweep_args, out_dir);
    } else if (app.got_subcommand(c_opt)) {
      manifest.subcommand = "optimize";
      manifest.outputs = run_optimize(cfg, opt_args, out_dir);
    }

    manifest.finished_utc = utc_timestamp_now();
    write_manifest(out_dir, manifest);
    std::cout << manifest.subcommand << ": wrote";
    for (const auto& f : manifest.outputs) std::cout << " " << f;
    std::cout << " manifest.json in " << out_dir << "\n";
    return 0;
  } catch (const std::exception& e) {
    json err;
    err["error"] = {{"type", error_kind(e)}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
