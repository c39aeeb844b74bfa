#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace normnet {

// Deterministic helpers on top of mt19937_64. std::uniform_*_distribution is
// implementation-defined, so seeded runs would differ across standard
// libraries; these do not.

inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform draw from [0, n). n must be > 0.
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t bound = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
  std::uint64_t x = rng();
  while (x > bound) x = rng();
  return static_cast<std::size_t>(x % n);
}

template <typename T>
void shuffle_in_place(std::vector<T>& values, std::mt19937_64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[uniform_index(rng, i)]);
  }
}

}  // namespace normnet
