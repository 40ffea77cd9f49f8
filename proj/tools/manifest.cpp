#include "manifest.hpp"

#include <array>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace ewsim::cli {

std::string utc_timestamp_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buf;
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

std::string hash_hex(std::uint64_t h) {
  std::array<char, 20> buf;
  std::snprintf(buf.data(), buf.size(), "0x%016llx", static_cast<unsigned long long>(h));
  return buf.data();
}

std::string write_manifest(const std::string& out_dir, const RunManifest& m) {
  nlohmann::json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["subcommand"] = m.subcommand;
  j["config_hash"] = hash_hex(m.config_hash);
  j["seed"] = m.seed;
  j["threads"] = m.threads;
  j["started_utc"] = m.started_utc;
  j["finished_utc"] = m.finished_utc;
  j["outputs"] = m.outputs;
  const std::string path = out_dir + "/manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << j.dump(2) << "\n";
  return path;
}

}  // namespace ewsim::cli
