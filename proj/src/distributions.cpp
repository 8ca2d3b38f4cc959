#include "cgw/distributions.hpp"

#include <cmath>
#include <stdexcept>

namespace cgw::dist {

namespace {

constexpr int kLayers = 128;
constexpr double kR = 3.442619855899;        // rightmost layer edge
constexpr double kV = 9.91256303526217e-3;   // common layer area

struct ZigguratTables {
  double x[kLayers + 1];
  double f[kLayers + 1];
  double ratio[kLayers];

  ZigguratTables() {
    double fr = std::exp(-0.5 * kR * kR);
    x[0] = kV / fr;
    x[1] = kR;
    x[kLayers] = 0.0;
    for (int i = 2; i < kLayers; ++i) {
      x[i] = std::sqrt(-2.0 * std::log(kV / x[i - 1] + std::exp(-0.5 * x[i - 1] * x[i - 1])));
    }
    for (int i = 0; i <= kLayers; ++i) f[i] = std::exp(-0.5 * x[i] * x[i]);
    for (int i = 0; i < kLayers; ++i) ratio[i] = x[i + 1] / x[i];
  }
};

const ZigguratTables& tables() {
  static const ZigguratTables t;
  return t;
}

double normal_tail(rng::Xoshiro256pp& g, bool negative) {
  // samples |Z| > kR by the exponential-majorant method
  double x, y;
  do {
    x = -std::log(g.uniform_open()) / kR;
    y = -std::log(g.uniform_open());
  } while (y + y < x * x);
  return negative ? -(kR + x) : (kR + x);
}

}  // namespace

double normal(rng::Xoshiro256pp& g) {
  const ZigguratTables& t = tables();
  for (;;) {
    const std::uint64_t raw = g();
    const double u = (static_cast<double>(raw >> 11) * 0x1.0p-53) * 2.0 - 1.0;
    const int i = static_cast<int>(raw & (kLayers - 1));
    if (std::abs(u) < t.ratio[i]) return u * t.x[i];
    if (i == 0) return normal_tail(g, u < 0.0);
    const double z = u * t.x[i];
    if (t.f[i + 1] + g.uniform() * (t.f[i] - t.f[i + 1]) < std::exp(-0.5 * z * z))
      return z;
  }
}

double gamma(rng::Xoshiro256pp& g, double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
  if (shape < 1.0) {
    const double boost = std::pow(g.uniform_open(), 1.0 / shape);
    return gamma(g, shape + 1.0) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z, v;
    do {
      z = normal(g);
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = g.uniform_open();
    const double z2 = z * z;
    if (u < 1.0 - 0.0331 * z2 * z2) return d * v;
    if (std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double chi(rng::Xoshiro256pp& g, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("chi: df must be positive");
  return std::sqrt(2.0 * gamma(g, 0.5 * df));
}

}  // namespace cgw::dist
