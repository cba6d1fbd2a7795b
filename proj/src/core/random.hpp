#pragma once

#include <cstdint>
#include <random>

namespace pf2es {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; mixes a base seed with stream identifiers so that
/// independent components never share an RNG stream.
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (a + 1) + 0xBF58476D1CE4E5B9ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace pf2es
