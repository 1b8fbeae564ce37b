#pragma once

#include <cstdint>
#include <random>

namespace xcop {

/// Platform-independent draws on top of mt19937_64 (the standard
/// distributions are implementation-defined).
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace xcop
