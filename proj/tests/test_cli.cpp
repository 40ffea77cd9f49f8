#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"
#include "csvio.hpp"
#include "json.hpp"
#include "manifest.hpp"

#include "ewsim/budget.hpp"
#include "ewsim/constants.hpp"
#include "ewsim/ensemble.hpp"
#include "ewsim/species.hpp"

namespace fs = std::filesystem;
using ewsim::cli::RunConfig;
using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::path("cli_scratch") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Runs the installed binary through the shell; stdout/stderr land in files
// next to the run's outputs.
int run_cli(const std::string& args, const fs::path& dir, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + std::string(EWSIM_CLI_PATH) + " " +
                          args + " > " + (dir / "stdout.txt").string() + " 2> " +
                          (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

json parse_json_file(const fs::path& p) { return json::parse(read_file(p)); }

}  // namespace

TEST_CASE("default configuration materializes the reference setup") {
  const RunConfig cfg;
  const ewsim::AtomSpecies s = cfg.species();
  CHECK(s.name == "Rb-87");

  CHECK(cfg.is_auto("geometry.theta_i"));
  const ewsim::InterfaceGeometry g = cfg.geometry();
  CHECK(g.n() == doctest::Approx(1.51).epsilon(1e-15));
  CHECK(g.lambda0() == doctest::Approx(780e-9).epsilon(1e-15));
  CHECK(g.theta_i() == doctest::Approx(g.critical_angle() + 0.01).epsilon(1e-12));

  const ewsim::MirrorConfig m = cfg.mirror();
  CHECK(m.u0() ==
        doctest::Approx(2.0 * s.mass * ewsim::constants::g_earth * 6e-3).epsilon(1e-12));
  CHECK(m.delta1() == doctest::Approx(100.0 * s.gamma_d2).epsilon(1e-12));
  CHECK(m.branching_b() == doctest::Approx(0.5).epsilon(1e-15));

  const ewsim::MolassesConfig mol = cfg.molasses();
  CHECK(mol.temperature == doctest::Approx(10e-6).epsilon(1e-15));
  CHECK(mol.sigma_z == doctest::Approx(0.2e-3).epsilon(1e-15));
  CHECK(mol.drop_height == doctest::Approx(6e-3).epsilon(1e-15));
  CHECK(mol.n_atoms == 1000000);
  CHECK(mol.master_seed == 0);

  const ewsim::BinningSpec bins = cfg.binning();
  CHECK(bins.nz == 64);
  CHECK(bins.nv == 64);
  CHECK(bins.z_min == 0.0);
  CHECK(bins.z_max == doctest::Approx(2.5 / m.kappa()).epsilon(1e-12));

  const ewsim::BudgetInput bi = cfg.budget();
  const ewsim::BudgetInput def = ewsim::default_budget_input();
  CHECK(bi.delta1 == doctest::Approx(def.delta1).epsilon(1e-12));
  CHECK(bi.u1_ref == doctest::Approx(def.u1_ref).epsilon(1e-12));

  CHECK(cfg.seed() == 0);
  CHECK(cfg.threads() == 1);
  CHECK(cfg.entry_margin() == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(cfg.crossing_angle() == doctest::Approx(kTwoPi / 4.0).epsilon(1e-12));
  CHECK(cfg.get_raw("mirror.line") == "d2");
}

TEST_CASE("overrides parse, canonicalize, and hash stably") {
  RunConfig a;
  a.set("molasses.temperature", "1e-5");
  RunConfig b;
  b.set("molasses.temperature", "0.00001");
  CHECK(a.canonical_text() == b.canonical_text());
  CHECK(a.hash() == b.hash());

  RunConfig c;
  c.set("molasses.temperature", "2e-5");
  CHECK(c.hash() != a.hash());

  RunConfig d;
  d.set("mirror.delta1_gamma", "120");
  CHECK(d.mirror().delta1() == doctest::Approx(120.0 * ewsim::rb87().gamma_d2).epsilon(1e-12));
  d.set("mirror.u0", "3e-27");
  CHECK_FALSE(d.is_auto("mirror.u0"));
  CHECK(d.mirror().u0() == doctest::Approx(3e-27).epsilon(1e-15));

  CHECK_THROWS_AS(d.set("mirror.nonsense", "1"), std::invalid_argument);
  CHECK_THROWS_AS(d.set("molasses.temperature", "warm"), std::invalid_argument);
  CHECK_THROWS_AS(d.set("mirror.line", "d7"), std::invalid_argument);
  CHECK_THROWS_AS(d.set("molasses.n_atoms", "-5"), std::invalid_argument);

  try {
    d.set("crossing.second_mode", "tp");
    FAIL("expected a choice error");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("te") != std::string::npos);
    CHECK(msg.find("tm") != std::string::npos);
  }
}

TEST_CASE("ini files load with line-numbered diagnostics") {
  const fs::path dir = scratch_dir("ini");
  const fs::path good = dir / "good.ini";
  write_file(good,
             "# reference tweaks\n"
             "[molasses]\n"
             "n_atoms = 500\n"
             "\n"
             "[mirror]\n"
             "delta1_gamma = 80\n");
  const RunConfig cfg = RunConfig::load(good.string());
  CHECK(cfg.molasses().n_atoms == 500);
  CHECK(cfg.mirror().delta1() == doctest::Approx(80.0 * ewsim::rb87().gamma_d2).epsilon(1e-12));

  RunConfig by_set;
  by_set.set("molasses.n_atoms", "500");
  by_set.set("mirror.delta1_gamma", "80");
  CHECK(cfg.canonical_text() == by_set.canonical_text());

  const fs::path bad = dir / "bad.ini";
  write_file(bad, "[molasses]\nn_atoms = 500\nwhat is this line\n");
  try {
    RunConfig::load(bad.string());
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }

  CHECK_THROWS_AS(RunConfig::load((dir / "missing.ini").string()), std::invalid_argument);

  // An empty config is a valid run configuration: all defaults.
  const fs::path empty = dir / "empty.ini";
  write_file(empty, "");
  CHECK(RunConfig::load(empty.string()).hash() == RunConfig().hash());
}

TEST_CASE("csv cells round trip through the shortest decimal form") {
  using ewsim::cli::format_double;
  using ewsim::cli::parse_double_cell;
  for (double v : {0.1, -3.5, 1.18124848352e-4, 6.62607015e-34, 2.0 / 3.0, 480000.0}) {
    CHECK(parse_double_cell(format_double(v)) == v);
  }

  const fs::path dir = scratch_dir("csv");
  const fs::path table = dir / "t.csv";
  ewsim::cli::write_table_csv(table.string(), {"a", "b"}, {{1.5, -2.0}, {0.25, 1e-9}});
  const auto cells = ewsim::cli::read_csv(table.string());
  REQUIRE(cells.size() == 3);
  CHECK(cells[0][0] == "a");
  CHECK(cells[0][1] == "b");
  CHECK(parse_double_cell(cells[1][0]) == 1.5);
  CHECK(parse_double_cell(cells[2][1]) == 1e-9);

  const fs::path matrix = dir / "m.csv";
  ewsim::cli::write_matrix_csv(matrix.string(), "z", {-0.5, 0.5}, {10.0, 20.0, 30.0},
                               {{1, 2}, {3, 4}, {5, 6}});
  const auto mc = ewsim::cli::read_csv(matrix.string());
  REQUIRE(mc.size() == 4);
  CHECK(mc[0][0] == "z");
  REQUIRE(mc[0].size() == 3);
  CHECK(parse_double_cell(mc[0][2]) == 0.5);
  CHECK(parse_double_cell(mc[3][0]) == 30.0);
  CHECK(parse_double_cell(mc[3][2]) == 6.0);
}

TEST_CASE("manifest serializes provenance with a stable hash format") {
  CHECK(ewsim::cli::hash_hex(0x1234) == "0x0000000000001234");
  CHECK(ewsim::cli::hash_hex(0xDEADBEEFDEADBEEFull) == "0xdeadbeefdeadbeef");

  const std::string ts = ewsim::cli::utc_timestamp_now();
  REQUIRE(ts.size() == 20);
  CHECK(ts[4] == '-');
  CHECK(ts[10] == 'T');
  CHECK(ts.back() == 'Z');

  const fs::path dir = scratch_dir("manifest");
  ewsim::cli::RunManifest m;
  m.subcommand = "mc";
  m.config_hash = 42;
  m.seed = 7;
  m.threads = 2;
  m.started_utc = ts;
  m.finished_utc = ts;
  m.outputs = {"hist.csv", "report.json"};
  const std::string path = ewsim::cli::write_manifest(dir.string(), m);
  const json j = parse_json_file(path);
  CHECK(j["tool"] == "ewsim");
  CHECK(j["subcommand"] == "mc");
  CHECK(j["config_hash"] == "0x000000000000002a");
  CHECK(j["seed"] == 7);
  CHECK(j["threads"] == 2);
  CHECK(j["outputs"].size() == 2);
}

TEST_CASE("mc runs are byte-identical across thread counts and reruns") {
  const fs::path d1 = scratch_dir("mc1");
  const fs::path d2 = scratch_dir("mc2");
  const fs::path d3 = scratch_dir("mc3");
  const std::string common = "mc --set molasses.n_atoms=1500 --seed 5 --out ";
  CHECK(run_cli(common + d1.string() + " --threads 1", d1) == 0);
  CHECK(run_cli(common + d2.string() + " --threads 4", d2) == 0);
  CHECK(run_cli(common + d3.string() + " --threads 1", d3) == 0);

  const std::string h1 = read_file(d1 / "hist.csv");
  REQUIRE_FALSE(h1.empty());
  CHECK(h1 == read_file(d2 / "hist.csv"));
  CHECK(h1 == read_file(d3 / "hist.csv"));
  CHECK(read_file(d1 / "report.json") == read_file(d2 / "report.json"));

  const json rep = parse_json_file(d1 / "report.json");
  CHECK(rep["n_requested"] == 1500);
  CHECK(rep["seed"] == 5);
  CHECK(rep["binning"]["nz"] == 64);
  const double total = rep["pumped_fraction"].get<double>() +
                       rep["unpumped_fraction"].get<double>() +
                       rep["overrun_fraction"].get<double>();
  CHECK(total == 1.0);

  // Histogram layout: corner label, 64 velocity headers, 64 rows of 65 cells.
  const auto cells = ewsim::cli::read_csv((d1 / "hist.csv").string());
  REQUIRE(cells.size() == 65);
  CHECK(cells[0][0] == "z");
  CHECK(cells[0].size() == 65);
  for (const auto& row : cells) CHECK(row.size() == 65);

  RunConfig cfg;
  cfg.set("molasses.n_atoms", "1500");
  const ewsim::BinningSpec bins = cfg.binning();
  CHECK(ewsim::cli::parse_double_cell(cells[0][1]) ==
        doctest::Approx(bins.v_center(0)).epsilon(1e-12));
  CHECK(ewsim::cli::parse_double_cell(cells[1][0]) ==
        doctest::Approx(bins.z_center(0)).epsilon(1e-12));
  CHECK(ewsim::cli::parse_double_cell(cells[64][0]) ==
        doctest::Approx(bins.z_center(63)).epsilon(1e-12));

  const json man = parse_json_file(d1 / "manifest.json");
  CHECK(man["subcommand"] == "mc");
  CHECK(man["seed"] == 5);
  CHECK(man["outputs"].size() == 2);
}

TEST_CASE("sub-critical incidence is rejected with a structured error") {
  const fs::path dir = scratch_dir("err");
  const int code = run_cli("mc --set geometry.theta_offset=-0.02 --out " + dir.string(), dir);
  CHECK(code == 1);
  const json err = parse_json_file(dir / "stderr.txt");
  CHECK(err["error"]["type"] == "invalid_argument");
  const std::string msg = err["error"]["message"].get<std::string>();
  CHECK(msg.find("evanescent") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "hist.csv"));
}

TEST_CASE("output directory falls back to the environment default") {
  const fs::path dir = scratch_dir("envout");
  const int code = run_cli("mc --set molasses.n_atoms=300", dir,
                           "EWSIM_OUT=" + dir.string());
  CHECK(code == 0);
  CHECK(fs::exists(dir / "hist.csv"));
  CHECK(fs::exists(dir / "manifest.json"));
  const json rep = parse_json_file(dir / "report.json");
  CHECK(rep["seed"] == 0);  // config default when no --seed given
}

TEST_CASE("config file values yield to explicit set overrides") {
  const fs::path dir = scratch_dir("prec");
  const fs::path ini = dir / "run.ini";
  write_file(ini, "[molasses]\nn_atoms = 900\n[run]\nseed = 11\n");
  const int code = run_cli("mc --config " + ini.string() +
                               " --set molasses.n_atoms=700 --out " + dir.string(),
                           dir);
  CHECK(code == 0);
  const json rep = parse_json_file(dir / "report.json");
  CHECK(rep["n_requested"] == 700);
  CHECK(rep["seed"] == 11);
}

TEST_CASE("budget subcommand reports channels and a detuning scan") {
  const fs::path dir = scratch_dir("budget");
  CHECK(run_cli("budget --out " + dir.string(), dir) == 0);
  const json b = parse_json_file(dir / "budget.json");
  const ewsim::BudgetInput def = ewsim::default_budget_input();
  CHECK(b["crosstalk_no_darkstate"].get<double>() ==
        doctest::Approx(ewsim::crosstalk_rate(def)).epsilon(1e-12));
  CHECK(b["total_dark"].get<double>() == doctest::Approx(55.2685152343).epsilon(1e-9));
  CHECK(b["inputs"]["delta1"].get<double>() == doctest::Approx(def.delta1).epsilon(1e-12));

  const auto scan = ewsim::cli::read_csv((dir / "budget_scan.csv").string());
  REQUIRE(scan.size() == 65);
  CHECK(scan[0][0] == "delta1_Hz");
  CHECK(ewsim::cli::parse_double_cell(scan[1][0]) == doctest::Approx(50e9).epsilon(1e-9));
  CHECK(ewsim::cli::parse_double_cell(scan[64][0]) == doctest::Approx(500e9).epsilon(1e-9));

  // At the bouncer detuning of the no-dark-state comparison the crosstalk
  // rate lands near five thousand per second.
  const fs::path dir2 = scratch_dir("budget06");
  const std::string d06 = ewsim::cli::format_double(kTwoPi * 0.6e9);
  CHECK(run_cli("budget --set budget.delta1=" + d06 + " --out " + dir2.string(), dir2) == 0);
  const json b2 = parse_json_file(dir2 / "budget.json");
  CHECK(b2["crosstalk_no_darkstate"].get<double>() ==
        doctest::Approx(5014.61524224).epsilon(1e-8));
}

TEST_CASE("field subcommand maps a uniform crossed-beam intensity") {
  const fs::path dir = scratch_dir("field");
  CHECK(run_cli("field --set crossing.grid_n=8 --out " + dir.string(), dir) == 0);
  const auto cells = ewsim::cli::read_csv((dir / "field.csv").string());
  REQUIRE(cells.size() == 65);
  REQUIRE(cells[0].size() == 6);
  CHECK(cells[0][0] == "x");
  CHECK(cells[0][5] == "s3");
  for (std::size_t i = 1; i < cells.size(); ++i) {
    // Two unit TE beams at right angles: intensity 2 everywhere.
    CHECK(ewsim::cli::parse_double_cell(cells[i][2]) == doctest::Approx(2.0).epsilon(1e-9));
    const double s3 = ewsim::cli::parse_double_cell(cells[i][5]);
    CHECK(s3 >= -1.0 - 1e-12);
    CHECK(s3 <= 1.0 + 1e-12);
  }
}

TEST_CASE("bounce subcommand records one trajectory with its exposure") {
  const fs::path dir = scratch_dir("bounce");
  CHECK(run_cli("bounce --seed 2 --out " + dir.string(), dir) == 0);
  const json b = parse_json_file(dir / "bounce.json");
  const RunConfig cfg;
  const double edge = cfg.entry_margin() / cfg.mirror().kappa();
  const double v_edge =
      std::sqrt(2.0 * ewsim::constants::g_earth * (cfg.molasses().drop_height - edge));
  CHECK(b["entry_speed"].get<double>() == doctest::Approx(v_edge).epsilon(1e-9));
  CHECK(b.contains("pumped"));
  CHECK(b["max_energy_drift"].get<double>() < 1e-8);

  const auto rows = ewsim::cli::read_csv((dir / "bounce.csv").string());
  REQUIRE(rows.size() > 100);
  CHECK(rows[0] == std::vector<std::string>{"t", "z", "v", "raman_exposure"});
  double t_prev = -1.0, y_prev = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double t = ewsim::cli::parse_double_cell(rows[i][0]);
    const double y = ewsim::cli::parse_double_cell(rows[i][3]);
    CHECK(t > t_prev);
    CHECK(y >= y_prev);
    t_prev = t;
    y_prev = y;
  }
}

TEST_CASE("detuning sweep peaks away from the scan edges") {
  const fs::path dir = scratch_dir("sweep");
  CHECK(run_cli("sweep --param mirror.delta1_gamma --from 60 --to 170 --steps 5"
                " --set molasses.n_atoms=6000 --seed 9 --out " +
                    dir.string(),
                dir) == 0);
  const auto cells = ewsim::cli::read_csv((dir / "sweep.csv").string());
  REQUIRE(cells.size() == 6);
  CHECK(cells[0][0] == "mirror.delta1_gamma");
  CHECK(cells[0][2] == "peak_final");
  CHECK(ewsim::cli::parse_double_cell(cells[1][0]) == doctest::Approx(60.0).epsilon(1e-12));
  CHECK(ewsim::cli::parse_double_cell(cells[5][0]) == doctest::Approx(170.0).epsilon(1e-12));

  std::size_t best = 1;
  double best_peak = -1.0;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const double peak = ewsim::cli::parse_double_cell(cells[i][2]);
    if (peak > best_peak) {
      best_peak = peak;
      best = i;
    }
  }
  CHECK(best != 1);
  CHECK(best != 5);
}

TEST_CASE("usage help names the output directory environment variable") {
  const fs::path dir = scratch_dir("help");
  CHECK(run_cli("--help", dir) == 0);
  const std::string out = read_file(dir / "stdout.txt");
  CHECK(out.find("EWSIM_OUT") != std::string::npos);
  CHECK(out.find("mc") != std::string::npos);
  CHECK(out.find("budget") != std::string::npos);
}
