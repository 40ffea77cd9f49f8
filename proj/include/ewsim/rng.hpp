#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ewsim {

// Counter-seeded per-trajectory random stream: stream index i of master seed s
// always produces the same draws, independent of thread count or scheduling.
// xoshiro256++ state is expanded from (s, i) with splitmix64. The normal
// transform is Box-Muller on explicit 53-bit uniforms, so results do not
// depend on library distribution internals.
class TrajectoryRng {
 public:
  TrajectoryRng(std::uint64_t master_seed, std::uint64_t stream_index) {
    std::uint64_t x = master_seed + 0x9E3779B97F4A7C15ULL * (stream_index + 1);
    for (auto& word : s_) word = splitmix64(x);
  }

  std::uint64_t next_bits() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_bits() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe under log().
  double uniform_pos() {
    return static_cast<double>((next_bits() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal (Box-Muller, second value cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
  static std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t s_[4];
  double spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace ewsim
