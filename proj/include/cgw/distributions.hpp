#pragma once

#include <cstdint>
#include <stdexcept>

#include "cgw/rng.hpp"

namespace cgw::dist {

// Standard normal draw via the ziggurat method (128 layers, Doornik's
// layout). Roughly 5x faster than Box-Muller, which matters: Wishart
// sampling at n = 2000 consumes ~2e7 normals per matrix.
double normal(rng::Xoshiro256pp& g);

// Gamma(shape, scale 1) via Marsaglia-Tsang squeeze; shape < 1 handled by
// the boost gamma(shape+1) * U^(1/shape).
double gamma(rng::Xoshiro256pp& g, double shape);

// Chi-squared with df degrees of freedom (df > 0, not necessarily integer).
inline double chi_squared(rng::Xoshiro256pp& g, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("chi_squared: df must be positive");
  return 2.0 * gamma(g, 0.5 * df);
}

// Chi with df degrees of freedom: sqrt of a chi-squared draw.
double chi(rng::Xoshiro256pp& g, double df);

// +1 or -1 with equal probability.
inline double rademacher(rng::Xoshiro256pp& g) {
  return (g() >> 63) ? 1.0 : -1.0;
}

}  // namespace cgw::dist
