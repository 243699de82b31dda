#pragma once

#include <cstdint>

namespace skoromap::detail {

/// splitmix64: tiny, fully specified, and good enough for scenario
/// generation; keeps generated fixtures identical across platforms.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t x = (state += 0x9E3779B97F4A7C15ull);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  /// Uniform in [0, 1).
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [-1, 1].
  double sym() { return 2.0 * u01() - 1.0; }
};

/// Order-free child seed for replication r of a simulation seed.
inline std::uint64_t child_seed(std::uint64_t seed, std::uint64_t r) {
  SplitMix64 rng(seed ^ (0x9E3779B97F4A7C15ull * (r + 1)));
  return rng.next();
}

}  // namespace skoromap::detail
