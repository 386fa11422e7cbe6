#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace coalscope {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; a bijective 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a of a scenario tag, so tags can be plain strings.
constexpr std::uint64_t tag_hash(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Stream for replicate `index` of scenario `tag` under `master_seed`.
/// Streams depend only on these three values, never on scheduling.
inline Rng make_stream(std::uint64_t master_seed, std::string_view tag, std::uint64_t index) {
  const std::uint64_t key = mix64(mix64(master_seed ^ tag_hash(tag)) + mix64(index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

/// Uniform on the open interval (0,1).
inline double uniform01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline double standard_exponential(Rng& rng) { return -std::log(uniform01(rng)); }

inline double standard_normal(Rng& rng) {
  // Box-Muller, one variate per call so the draw count is fixed.
  const double r = std::sqrt(-2.0 * std::log(uniform01(rng)));
  return r * std::cos(6.283185307179586 * uniform01(rng));
}

inline std::int64_t poisson(Rng& rng, double mean) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<std::int64_t> dist(mean);
  return dist(rng);
}

}  // namespace coalscope
