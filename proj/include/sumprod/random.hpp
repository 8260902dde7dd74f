#pragma once

#include <cstdint>
#include <random>

namespace sumprod {

/// Name written into run manifests; identifies the exact sampling procedure.
inline constexpr const char* kGeneratorName =
    "mt19937_64; state=splitmix64(seed + 0x9e3779b97f4a7c15*(index+1)); uniform by rejection";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Engine for stream `index` of a run seeded with `seed`.
inline std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t index = 0) {
  return std::mt19937_64(splitmix64(seed + 0x9e3779b97f4a7c15ULL * (index + 1)));
}

/// Uniform integer in [0, bound). std::uniform_int_distribution is
/// implementation-defined, so the reduction is spelled out here.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  for (;;) {
    std::uint64_t x = rng();
    if (x <= limit) return x % bound;
  }
}

}  // namespace sumprod
