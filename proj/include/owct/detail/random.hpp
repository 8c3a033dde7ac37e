#pragma once

#include <cstdint>
#include <random>

#include "owct/measure.hpp"

namespace owct::detail {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Entries uniform on [-bound, bound], each zeroed with probability zero_frac.
inline MeasurableFn random_function(std::size_t n, Rng& rng, double bound = 3.0,
                                    double zero_frac = 0.1) {
  MeasurableFn f(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double v = uniform(rng, -bound, bound);
    f(i) = uniform(rng, 0.0, 1.0) < zero_frac ? 0.0 : v;
  }
  return f;
}

/// Independent stream for task k derived from a master seed.
inline Rng split(std::uint64_t seed, std::uint64_t k) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  return Rng(seq);
}

}  // namespace owct::detail
