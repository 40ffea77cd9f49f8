#include "config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ewsim/constants.hpp"

namespace ewsim::cli {

namespace {

enum class KeyType { dbl, dbl_or_auto, u64, integer, choice };

struct KeySpec {
  const char* name;  // "section.key"
  KeyType type;
  const char* def;
  const char* choices;  // '|'-separated, for KeyType::choice
};

// Fixed declaration order; canonical_text() and the hash follow it.
constexpr std::array<KeySpec, 30> kKeys{{
    {"species.name", KeyType::choice, "rb87", "rb87"},
    {"geometry.n", KeyType::dbl, "1.51", nullptr},
    {"geometry.theta_i", KeyType::dbl_or_auto, "auto", nullptr},
    {"geometry.theta_offset", KeyType::dbl, "0.01", nullptr},
    {"geometry.lambda0", KeyType::dbl, "780e-9", nullptr},
    {"mirror.u0", KeyType::dbl_or_auto, "auto", nullptr},
    {"mirror.u0_impact_factor", KeyType::dbl, "2", nullptr},
    {"mirror.delta1", KeyType::dbl_or_auto, "auto", nullptr},
    {"mirror.delta1_gamma", KeyType::dbl, "100", nullptr},
    {"mirror.branching_b", KeyType::dbl, "0.5", nullptr},
    {"mirror.line", KeyType::choice, "d2", "d1|d2"},
    {"molasses.temperature", KeyType::dbl, "10e-6", nullptr},
    {"molasses.sigma_z", KeyType::dbl, "0.2e-3", nullptr},
    {"molasses.drop_height", KeyType::dbl, "6e-3", nullptr},
    {"molasses.n_atoms", KeyType::u64, "1000000", nullptr},
    {"binning.nz", KeyType::integer, "64", nullptr},
    {"binning.nv", KeyType::integer, "64", nullptr},
    {"binning.z_max", KeyType::dbl_or_auto, "auto", nullptr},
    {"binning.v_max", KeyType::dbl_or_auto, "auto", nullptr},
    {"run.seed", KeyType::u64, "0", nullptr},
    {"run.threads", KeyType::integer, "1", nullptr},
    {"run.entry_margin", KeyType::dbl, "2.5", nullptr},
    {"budget.delta1", KeyType::dbl, "6.283185307179586e11", nullptr},
    {"budget.u1_ref", KeyType::dbl, "7.95128418e-27", nullptr},
    {"budget.impurity_eps", KeyType::dbl, "1e-3", nullptr},
    {"budget.line_strength", KeyType::dbl, "2", nullptr},
    {"budget.scan_lo", KeyType::dbl, "3.141592653589793e11", nullptr},
    {"budget.scan_hi", KeyType::dbl, "3.141592653589793e12", nullptr},
    {"budget.scan_points", KeyType::integer, "64", nullptr},
    {"crossing.angle_deg", KeyType::dbl, "90", nullptr},
}};

// crossing.grid_n and crossing.second_mode are appended separately to keep
// the array literal readable.
constexpr std::array<KeySpec, 2> kKeysExtra{{
    {"crossing.grid_n", KeyType::integer, "64", nullptr},
    {"crossing.second_mode", KeyType::choice, "te", "te|tm"},
}};

const KeySpec* find_key(const std::string& dotted) {
  for (const auto& k : kKeys)
    if (dotted == k.name) return &k;
  for (const auto& k : kKeysExtra)
    if (dotted == k.name) return &k;
  return nullptr;
}

template <typename Fn>
void for_each_key(Fn&& fn) {
  for (const auto& k : kKeys) fn(k);
  for (const auto& k : kKeysExtra) fn(k);
}

std::string format_shortest(double v) {
  std::array<char, 64> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

double parse_double(const std::string& dotted, const std::string& text) {
  double v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw std::invalid_argument("value for '" + dotted + "' is not a number: '" + text + "'");
  if (!std::isfinite(v))
    throw std::invalid_argument("value for '" + dotted + "' must be finite");
  return v;
}

std::uint64_t parse_u64(const std::string& dotted, const std::string& text) {
  std::uint64_t v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw std::invalid_argument("value for '" + dotted + "' is not an unsigned integer: '" +
                                text + "'");
  return v;
}

int parse_int(const std::string& dotted, const std::string& text) {
  int v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw std::invalid_argument("value for '" + dotted + "' is not an integer: '" + text + "'");
  return v;
}

bool choice_allowed(const char* choices, const std::string& value) {
  std::string all(choices);
  std::size_t pos = 0;
  while (pos <= all.size()) {
    const std::size_t bar = all.find('|', pos);
    const std::string item = all.substr(pos, bar == std::string::npos ? bar : bar - pos);
    if (item == value) return true;
    if (bar == std::string::npos) break;
    pos = bar + 1;
  }
  return false;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig::RunConfig() {
  for_each_key([&](const KeySpec& k) { set(k.name, k.def); });
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  RunConfig cfg;
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    try {
      if (t.front() == '[') {
        if (t.back() != ']') throw std::invalid_argument("unterminated section header");
        section = trim(t.substr(1, t.size() - 2));
        if (section.empty()) throw std::invalid_argument("empty section name");
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("expected 'key = value' or '[section]'");
      if (section.empty()) throw std::invalid_argument("key outside any [section]");
      cfg.set(section + "." + trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

void RunConfig::set(const std::string& dotted, const std::string& value) {
  const KeySpec* spec = find_key(dotted);
  if (!spec) throw std::invalid_argument("unknown config key '" + dotted + "'");
  switch (spec->type) {
    case KeyType::dbl:
      values_[dotted] = format_shortest(parse_double(dotted, value));
      break;
    case KeyType::dbl_or_auto:
      values_[dotted] = value == "auto" ? value : format_shortest(parse_double(dotted, value));
      break;
    case KeyType::u64:
      values_[dotted] = std::to_string(parse_u64(dotted, value));
      break;
    case KeyType::integer:
      values_[dotted] = std::to_string(parse_int(dotted, value));
      break;
    case KeyType::choice:
      if (!choice_allowed(spec->choices, value))
        throw std::invalid_argument("value for '" + dotted + "' must be one of {" +
                                    spec->choices + "}, got '" + value + "'");
      values_[dotted] = value;
      break;
  }
}

const std::string& RunConfig::get_raw(const std::string& dotted) const {
  const auto it = values_.find(dotted);
  if (it == values_.end()) throw std::logic_error("config key not present: " + dotted);
  return it->second;
}

double RunConfig::get_double(const std::string& dotted) const {
  return parse_double(dotted, get_raw(dotted));
}

bool RunConfig::is_auto(const std::string& dotted) const { return get_raw(dotted) == "auto"; }

std::uint64_t RunConfig::get_u64(const std::string& dotted) const {
  return parse_u64(dotted, get_raw(dotted));
}

int RunConfig::get_int(const std::string& dotted) const {
  return parse_int(dotted, get_raw(dotted));
}

std::string RunConfig::canonical_text() const {
  std::ostringstream out;
  for_each_key([&](const KeySpec& k) { out << k.name << " = " << get_raw(k.name) << "\n"; });
  return out.str();
}

std::uint64_t RunConfig::hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : canonical_text()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

AtomSpecies RunConfig::species() const {
  return rb87();  // species.name is validated to the one supported value
}

InterfaceGeometry RunConfig::geometry() const {
  const double n = get_double("geometry.n");
  const double theta = is_auto("geometry.theta_i")
                           ? InterfaceGeometry::critical_angle_for(n) +
                                 get_double("geometry.theta_offset")
                           : get_double("geometry.theta_i");
  return InterfaceGeometry(n, theta, get_double("geometry.lambda0"));
}

MirrorConfig RunConfig::mirror() const {
  const AtomSpecies sp = species();
  const LaserLine line = get_raw("mirror.line") == "d1" ? LaserLine::d1 : LaserLine::d2;
  const double u0 = is_auto("mirror.u0")
                        ? get_double("mirror.u0_impact_factor") * sp.mass * constants::g_earth *
                              get_double("molasses.drop_height")
                        : get_double("mirror.u0");
  const double delta1 = is_auto("mirror.delta1")
                            ? get_double("mirror.delta1_gamma") * sp.linewidth(line)
                            : get_double("mirror.delta1");
  return MirrorConfig(sp, geometry(), u0, delta1, get_double("mirror.branching_b"), line);
}

MolassesConfig RunConfig::molasses() const {
  MolassesConfig m;
  m.temperature = get_double("molasses.temperature");
  m.sigma_z = get_double("molasses.sigma_z");
  m.drop_height = get_double("molasses.drop_height");
  m.n_atoms = get_u64("molasses.n_atoms");
  m.master_seed = seed();
  m.validate();
  return m;
}

BinningSpec RunConfig::binning() const {
  BinningSpec spec = default_binning(mirror(), molasses(), entry_margin(),
                                     get_int("binning.nz"), get_int("binning.nv"));
  if (!is_auto("binning.z_max")) spec.z_max = get_double("binning.z_max");
  if (!is_auto("binning.v_max")) {
    const double vm = get_double("binning.v_max");
    spec.v_min = -vm;
    spec.v_max = vm;
  }
  spec.validate();
  return spec;
}

BudgetInput RunConfig::budget() const {
  BudgetInput in;
  in.species = species();
  in.delta1 = get_double("budget.delta1");
  in.u1_ref = get_double("budget.u1_ref");
  in.impurity_eps = get_double("budget.impurity_eps");
  in.line_strength_d2_over_d1 = get_double("budget.line_strength");
  in.validate();
  return in;
}

EnsembleOptions RunConfig::ensemble_options() const {
  EnsembleOptions opts;
  opts.threads = threads();
  opts.entry_margin = entry_margin();
  return opts;
}

double RunConfig::crossing_angle() const {
  return get_double("crossing.angle_deg") * std::numbers::pi / 180.0;
}

BeamMode RunConfig::second_beam_mode() const {
  return get_raw("crossing.second_mode") == "tm" ? BeamMode::tm : BeamMode::te;
}

}  // namespace ewsim::cli
