// core/include/hardylab/rng.hpp
//
// Deterministic RNG for test-instance generation. mt19937_64 plus a fixed
// 53-bit mapping to doubles, so seeded streams are byte-identical across
// platforms and standard-library versions (std::uniform_real_distribution
// is not pinned by the standard).

#pragma once

#include "hardylab/types.hpp"

#include <random>

namespace hardylab {

struct Rng {
  std::mt19937_64 eng;

  explicit Rng(std::uint64_t seed) : eng(seed) {}

  double u01() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  cplx ucplx(double lo, double hi) {
    const double re = uniform(lo, hi);
    const double im = uniform(lo, hi);
    return cplx(re, im);
  }
};

}  // namespace hardylab
