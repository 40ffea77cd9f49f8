#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ewsim::cli {

inline constexpr const char* kToolName = "ewsim";
inline constexpr const char* kToolVersion = "0.1.0";

// Provenance record written next to every run's outputs. The config hash is
// over the canonical config text, so it is stable across platforms and
// across different spellings of the same values.
struct RunManifest {
  std::string subcommand;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string started_utc;   // ISO 8601, second resolution
  std::string finished_utc;
  std::vector<std::string> outputs;  // file names relative to the output dir
};

std::string utc_timestamp_now();
std::string hash_hex(std::uint64_t h);

// Serializes the manifest as JSON to <out_dir>/manifest.json and returns the
// full path.
std::string write_manifest(const std::string& out_dir, const RunManifest& m);

}  // namespace ewsim::cli
