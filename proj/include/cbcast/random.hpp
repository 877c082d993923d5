#pragma once

#include <cstdint>
#include <random>

namespace cbcast {

using Engine = std::mt19937_64;

// splitmix64 finalizer; maps (master seed, stream id) to an independent sub-stream seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Engine make_engine(std::uint64_t master, std::uint64_t stream) {
  return Engine{derive_seed(master, stream)};
}

// Uniform draw on [lo, hi]; returns lo exactly for a point mass.
inline double draw_uniform(Engine& engine, double lo, double hi) {
  if (lo == hi)
    return lo;
  return std::uniform_real_distribution<double>{lo, hi}(engine);
}

} // namespace cbcast
