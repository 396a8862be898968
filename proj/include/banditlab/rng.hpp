#pragma once

#include <cstdint>
#include <random>

#include "banditlab/linalg.hpp"

namespace banditlab {

using Rng = std::mt19937_64;

/// Independent stream for (seed, tag); lets one run own several
/// non-interfering streams (arm sets, noise, policy coin flips).
inline Rng make_stream(std::uint64_t seed, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

inline Vec gaussian_vector(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = normal(rng);
  return v;
}

/// Uniform draw from the unit sphere in R^d.
inline Vec random_unit_vector(Eigen::Index d, Rng& rng) {
  for (;;) {
    Vec v = gaussian_vector(d, rng);
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

inline bool bernoulli(double p, Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

}  // namespace banditlab
