#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "ewsim/budget.hpp"
#include "ewsim/ensemble.hpp"
#include "ewsim/evanescent.hpp"
#include "ewsim/geometry.hpp"
#include "ewsim/mirror.hpp"
#include "ewsim/molasses.hpp"

namespace ewsim::cli {

// Flat key-value run configuration in INI form: [section] headers, key =
// value lines, '#'/';' comment lines. Every key has a default; unknown
// sections or keys are rejected with the offending line number. Values are
// canonicalized on entry (numbers re-formatted to shortest round-trip form)
// so the config hash is independent of how a number was spelled.
class RunConfig {
 public:
  RunConfig();  // all defaults

  static RunConfig load(const std::string& path);

  // dotted = "section.key"; throws std::invalid_argument for unknown keys or
  // unparseable values.
  void set(const std::string& dotted, const std::string& value);
  const std::string& get_raw(const std::string& dotted) const;

  double get_double(const std::string& dotted) const;
  bool is_auto(const std::string& dotted) const;
  std::uint64_t get_u64(const std::string& dotted) const;
  int get_int(const std::string& dotted) const;

  // One line per key in fixed order: "section.key = value".
  std::string canonical_text() const;
  std::uint64_t hash() const;  // FNV-1a 64 over canonical_text()

  AtomSpecies species() const;
  InterfaceGeometry geometry() const;
  MirrorConfig mirror() const;
  MolassesConfig molasses() const;
  BinningSpec binning() const;
  BudgetInput budget() const;
  EnsembleOptions ensemble_options() const;

  std::uint64_t seed() const { return get_u64("run.seed"); }
  int threads() const { return get_int("run.threads"); }
  double entry_margin() const { return get_double("run.entry_margin"); }

  double crossing_angle() const;  // rad
  int field_grid() const { return get_int("crossing.grid_n"); }
  BeamMode second_beam_mode() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace ewsim::cli
