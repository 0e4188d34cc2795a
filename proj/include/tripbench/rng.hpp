#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "tripbench/errors.hpp"

namespace tripbench {

// All sampling goes through these helpers instead of <random> distributions:
// the mt19937_64 engine is bit-specified by the standard, the distributions
// are not, and seeded runs must replay identically everywhere.
using Rng = std::mt19937_64;

// Uniform integer in [0, n) via rejection sampling.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  if (n == 0) throw InvalidInputError("uniform_index: n must be positive");
  const std::uint64_t span = n;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % span);
}

// Uniform double in [0, 1) with 53 random mantissa bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Index drawn proportionally to non-negative weights. Falls back to a uniform
// draw when every weight is zero.
inline std::size_t weighted_index(Rng& rng, std::span<const double> weights) {
  if (weights.empty()) throw InvalidInputError("weighted_index: empty weights");
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) return uniform_index(rng, weights.size());
  const double target = uniform_unit(rng) * total;
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    cum += weights[i];
    if (target < cum) return i;
  }
  return weights.size() - 1;
}

// k distinct indices from [0, n), in draw order.
inline std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k) {
  if (k > n) throw InvalidInputError("sample_without_replacement: k > n");
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  std::vector<std::size_t> picked;
  picked.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = uniform_index(rng, pool.size());
    picked.push_back(pool[j]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
  }
  return picked;
}

}  // namespace tripbench
