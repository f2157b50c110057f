#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ocs {

/// Engine with a fully specified output sequence. Distribution helpers
/// below are hand-written so draws do not depend on the standard library.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent stream seed for (seed, stream).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL));
}

/// Uniform in the open interval (0, 1).
inline double unit_uniform(Rng& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

inline double standard_normal(Rng& rng) {
  const double u1 = unit_uniform(rng), u2 = unit_uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline double exponential(Rng& rng, double rate) { return -std::log(unit_uniform(rng)) / rate; }

/// Uniform integer in [0, n).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(unit_uniform(rng) * static_cast<double>(n)) % n;
}

}  // namespace ocs
