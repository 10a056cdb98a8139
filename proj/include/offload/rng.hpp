#pragma once

#include <cstdint>
#include <random>

namespace offload {

/// splitmix64 finalizer; used to derive per-run seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of Monte-Carlo run `run_index` under global seed `seed`. Depends only
/// on the two inputs, so adding policies or sweep points never reshuffles
/// realizations.
constexpr std::uint64_t run_seed(std::uint64_t seed, std::uint64_t run_index) {
  return mix64(mix64(seed) ^ (run_index + 1) * 0xd1342543de82ef95ULL);
}

/// mt19937_64 with a portable [0,1) mapping (std::uniform_real_distribution
/// differs between standard libraries).
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

  double next01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [-1, 1].
  double next_symmetric() { return 2.0 * next01() - 1.0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace offload
