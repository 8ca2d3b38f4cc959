#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cgw/distributions.hpp"
#include "cgw/rng.hpp"
#include "oracles.hpp"

using namespace cgw;

TEST_CASE("streams are pure functions of (seed, index)") {
  auto a = rng::stream_for_sample(123, 5);
  auto b = rng::stream_for_sample(123, 5);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());

  auto c = rng::stream_for_sample(123, 6);
  bool differs = false;
  auto a2 = rng::stream_for_sample(123, 5);
  for (int i = 0; i < 10; ++i) differs = differs || (a2() != c());
  CHECK(differs);
}

TEST_CASE("uniform draws lie in [0,1) and have the right moments") {
  rng::Xoshiro256pp g(99);
  const int n = 1 << 20;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = g.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(sum2 / n == doctest::Approx(1.0 / 3.0).epsilon(3e-3));
}

TEST_CASE("ziggurat normal: moments, tails and KS against Phi") {
  rng::Xoshiro256pp g(2024);
  const int n = 1'000'000;
  double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
  int beyond3 = 0;
  Vec sample(100'000);
  for (int i = 0; i < n; ++i) {
    const double z = dist::normal(g);
    m1 += z;
    m2 += z * z;
    m3 += z * z * z;
    m4 += z * z * z * z;
    if (std::abs(z) > 3.0) ++beyond3;
    if (i < static_cast<int>(sample.size())) sample[i] = z;
  }
  m1 /= n;
  m2 /= n;
  m3 /= n;
  m4 /= n;
  // 4-standard-error windows
  CHECK(std::abs(m1) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(m2 - 1.0) < 4.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(m3) < 4.0 * std::sqrt(15.0 / n));
  CHECK(std::abs(m4 - 3.0) < 4.0 * std::sqrt(96.0 / n));

  const double p3 = std::erfc(3.0 / std::sqrt(2.0));  // P(|Z| > 3)
  const double expect = n * p3;
  CHECK(std::abs(beyond3 - expect) < 5.0 * std::sqrt(expect));

  std::sort(sample.begin(), sample.end());
  double ks = 0.0;
  const double ns = static_cast<double>(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = oracles::standard_normal_cdf(sample[i]);
    ks = std::max(ks, std::abs(f - i / ns));
    ks = std::max(ks, std::abs(f - (i + 1) / ns));
  }
  CHECK(ks < 0.006);  // ~1.6/sqrt(1e5) is the 1% critical value
}

TEST_CASE("chi draws: mean at df=2, second moment, concentration") {
  // mean of chi_2 is Gamma(1.5) sqrt(2) / Gamma(1) = sqrt(pi/2)
  rng::Xoshiro256pp g(5);
  const int n = 1'000'000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += dist::chi(g, 2.0);
  const double mean = sum / n;
  const double expected = std::tgamma(1.5) * std::sqrt(2.0) / std::tgamma(1.0);
  CHECK(expected == doctest::Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-12));
  const double sd = std::sqrt(2.0 - expected * expected);
  CHECK(std::abs(mean - expected) < 3.0 * sd / std::sqrt(static_cast<double>(n)));

  for (double df : {1.0, 3.0, 7.5, 40.0}) {
    rng::Xoshiro256pp g2(77);
    const int nn = 200'000;
    double s2 = 0.0;
    for (int i = 0; i < nn; ++i) {
      const double c = dist::chi(g2, df);
      s2 += c * c;
    }
    const double se = std::sqrt(2.0 * df / nn);  // var of chi^2_df is 2 df
    CHECK(std::abs(s2 / nn - df) < 3.0 * se);
  }

  rng::Xoshiro256pp g3(11);
  const double df = 1e6;
  int within = 0;
  const int nn = 10'000;
  for (int i = 0; i < nn; ++i)
    if (std::abs(dist::chi(g3, df) / std::sqrt(df) - 1.0) < 0.01) ++within;
  CHECK(within >= nn * 99 / 100);
}

TEST_CASE("gamma sampling covers shape < 1") {
  rng::Xoshiro256pp g(31);
  const int n = 400'000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = dist::gamma(g, 0.5);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.02));
  CHECK(var == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("parameter validation") {
  rng::Xoshiro256pp g(1);
  CHECK_THROWS_AS(dist::chi(g, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(dist::chi(g, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(dist::gamma(g, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(dist::chi_squared(g, -2.0), std::invalid_argument);
}
