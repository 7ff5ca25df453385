#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace absnav {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser; decorrelates nearby integer seeds.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix_seed(seed)); }

/// Per-episode stream seed: base_seed xor episode_index.
inline std::uint64_t episode_seed(std::uint64_t base_seed, std::uint64_t index) {
  return base_seed ^ index;
}

/// Uniform double in [lo, hi) from the top 53 bits of one draw. Portable across
/// standard libraries, unlike std::uniform_real_distribution.
inline double uniform(Rng& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

/// Uniform integer in [lo, hi].
inline int uniform_int(Rng& rng, int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(rng() % span);
}

/// Standard normal draw via Box-Muller; portable across standard libraries.
inline double standard_normal(Rng& rng) {
  double u1 = 0.0;
  while (u1 <= 0.0) u1 = uniform(rng, 0.0, 1.0);
  const double u2 = uniform(rng, 0.0, 1.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace absnav
