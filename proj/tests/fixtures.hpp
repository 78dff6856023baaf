#pragma once

#include <random>
#include <vector>

#include "maxgraph/curve.hpp"

namespace maxgraph::fixtures {

// Portable uniform in [lo, hi): top 53 bits of the engine output.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

// Random increasing branch points: slit lengths and gaps drawn from
// [0.3, 2.0], then shifted so the hull is centred near the origin.
inline HyperellipticCurve random_curve(std::mt19937_64& rng, std::size_t slits) {
  std::vector<double> a;
  double x = 0.0;
  for (std::size_t k = 0; k < 2 * slits; ++k) {
    if (k > 0) x += uniform(rng, 0.3, 2.0);
    a.push_back(x);
  }
  const double shift = 0.5 * a.back() + uniform(rng, -0.5, 0.5);
  for (double& v : a) v -= shift;
  return make_curve(a);
}

inline HyperellipticCurve random_curve(unsigned seed, std::size_t slits) {
  std::mt19937_64 rng(seed);
  return random_curve(rng, slits);
}

}  // namespace maxgraph::fixtures
