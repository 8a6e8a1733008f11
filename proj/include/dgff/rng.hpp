#pragma once

#include <cstdint>
#include <random>

namespace dgff {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-task stream keyed by (master seed, task index). The derivation does not
// depend on how many streams were created before, so ensembles give the same
// results for any scheduling order.
inline Rng stream_rng(std::uint64_t master_seed, std::uint64_t stream) {
  return Rng(splitmix64(master_seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

}  // namespace dgff
