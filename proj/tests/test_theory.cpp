#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cgw/rng.hpp"
#include "cgw/theory.hpp"
#include "oracles.hpp"

using namespace cgw;
using theory::MpLaw;

namespace {

// integral of the MP density from d_minus to lambda(theta_hi), done in the
// substituted angle lambda = 1 + d - 2 sqrt(d) cos(theta) where the
// integrand is smooth even at the hard edge d = 1
double mp_mass_to(const MpLaw& law, double theta_hi) {
  const double sd = std::sqrt(law.d);
  return oracles::adaptive_simpson(
      [&](double th) {
        const double lam = 1.0 + law.d - 2.0 * sd * std::cos(th);
        return law.density(lam) * 2.0 * sd * std::sin(th);
      },
      0.0, theta_hi, 1e-13);
}

}  // namespace

TEST_CASE("MP density: support edges, pointwise value, total mass") {
  const MpLaw law(0.25);
  CHECK(law.d_minus == doctest::Approx(0.25));
  CHECK(law.d_plus == doctest::Approx(2.25));
  CHECK(law.density(law.d_minus) == 0.0);
  CHECK(law.density(law.d_plus) == 0.0);
  CHECK(law.density(0.1) == 0.0);
  CHECK(law.density(3.0) == 0.0);

  // direct evaluation at x = 1: sqrt((d+ - 1)(1 - d-)) / (2 pi d)
  const double expected = std::sqrt(1.25 * 0.75) / (2.0 * std::numbers::pi * 0.25);
  CHECK(law.density(1.0) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(law.density(1.0) == doctest::Approx(0.6164).epsilon(1e-3));

  for (double d : {0.1, 0.25, 0.5, 0.9, 1.0}) {
    const MpLaw l(d);
    const double mass = oracles::adaptive_simpson(
        [&](double x) { return l.density(x); }, l.d_minus, l.d_plus, 1e-13);
    CHECK(std::abs(mass - 1.0) <= 1e-10);
  }
}

TEST_CASE("MP closed-form CDF matches integrated density") {
  for (double d : {0.2, 0.5, 0.85, 1.0}) {
    const MpLaw law(d);
    CHECK(law.cdf(law.d_minus - 0.1) == 0.0);
    CHECK(law.cdf(law.d_plus + 0.1) == 1.0);
    for (int i = 1; i < 12; ++i) {
      const double x = law.d_minus + (law.d_plus - law.d_minus) * i / 12.0;
      const double by_quad = oracles::adaptive_simpson(
          [&](double t) { return law.density(t); }, law.d_minus, x, 1e-13);
      // the Simpson oracle itself only reaches ~1e-9 at the sqrt edges
      CHECK(law.cdf(x) == doctest::Approx(by_quad).epsilon(1e-8));
    }
  }
}

TEST_CASE("Chebyshev U: base cases and the trig identity") {
  CHECK(theory::chebyshev_u(0, 0.3) == 1.0);
  CHECK(theory::chebyshev_u(1, 0.3) == doctest::Approx(0.6));
  CHECK(theory::chebyshev_u(2, 0.5) == doctest::Approx(0.0).epsilon(1e-15));
  for (double x : {-0.95, -0.5, 0.03, 0.4, 0.99}) {
    const double th = std::acos(x);
    for (int k = 0; k <= 50; ++k) {
      const double trig = std::sin((k + 1) * th) / std::sin(th);
      CHECK(theory::chebyshev_u(k, x) == doctest::Approx(trig).epsilon(1e-10));
    }
  }
}

TEST_CASE("limit characteristic polynomial vs dense determinant") {
  CHECK(theory::limit_char_poly(0, 0.3, 2.0) == 1.0);
  for (double lam : {-1.0, 0.0, 0.7, 2.5})
    CHECK(theory::limit_char_poly(1, 0.4, lam) == doctest::Approx(1.0 - lam).epsilon(1e-14));

  {
    theory::LimitJacobi tj{5, 0.3};
    Matrix m = tj.dense();
    for (std::size_t i = 0; i < 5; ++i) m(i, i) -= 1.7;
    const double oracle = oracles::lu_determinant(m);
    CHECK(theory::limit_char_poly(5, 0.3, 1.7) ==
          doctest::Approx(oracle).epsilon(1e-10));
  }

  rng::Xoshiro256pp g(8);
  for (double d : {0.15, 0.5, 0.95}) {
    for (int k = 1; k <= 12; ++k) {
      const double lam = 3.0 * g.uniform();
      theory::LimitJacobi tj{k, d};
      Matrix m = tj.dense();
      for (int i = 0; i < k; ++i) m(i, i) -= lam;
      const double oracle = oracles::lu_determinant(m);
      const double mine = theory::limit_char_poly(k, d, lam);
      CHECK(std::abs(mine - oracle) <= 1e-9 * std::max(1.0, std::abs(oracle)));
    }
  }
}

TEST_CASE("LimitJacobi block equals truncated H H^T") {
  // H is lower bidiagonal with unit diagonal and sqrt(d) subdiagonal;
  // the k x k block of H H^T must match the LimitJacobi entries.
  const double d = 0.37;
  const int k = 6, big = 8;
  Matrix h(big, big);
  for (int i = 0; i < big; ++i) {
    h(i, i) = 1.0;
    if (i > 0) h(i, i - 1) = std::sqrt(d);
  }
  Matrix prod(big, big);
  for (int i = 0; i < big; ++i)
    for (int j = 0; j < big; ++j) {
      double s = 0.0;
      for (int t = 0; t < big; ++t) s += h(i, t) * h(j, t);
      prod(i, j) = s;
    }
  Matrix tkd = theory::LimitJacobi{k, d}.dense();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      CHECK(tkd(i, j) == doctest::Approx(prod(i, j)).epsilon(1e-14));
}

TEST_CASE("determinant recurrence D_{k+1} + D_{k-1} = 2x D_k") {
  rng::Xoshiro256pp g(17);
  for (double d : {0.2, 0.6, 0.9}) {
    const double sd = std::sqrt(d);
    for (int rep = 0; rep < 8; ++rep) {
      const double x = 2.0 * g.uniform() - 1.0;
      const double lam = 1.0 + d - 2.0 * sd * x;
      auto dk = [&](int k) {
        return theory::limit_char_poly(k, d, lam) / std::pow(d, 0.5 * k);
      };
      CHECK(dk(1) == doctest::Approx(2.0 * x - sd).epsilon(1e-12));
      for (int k = 1; k <= 30; ++k)
        CHECK(std::abs(dk(k + 1) + dk(k - 1) - 2.0 * x * dk(k)) <= 1e-10);
    }
  }
}

TEST_CASE("limit errors: closed forms") {
  CHECK(theory::limit_error(2, 3, 0.2) == doctest::Approx(std::sqrt(0.008)).epsilon(1e-12));
  CHECK(theory::limit_error(1, 0, 0.5) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  for (double d : {0.1, 0.4, 0.8}) CHECK(theory::limit_error(3, 0, d) == 1.0);
  CHECK_THROWS_AS(theory::limit_error(1, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(theory::limit_error(0, 2, 1.0), std::invalid_argument);
  CHECK(theory::limit_error(2, 4, 1.0) == 1.0);  // d = 1 allowed for ell >= 2

  // strict decrease in k for ell in {1,2}; for ell = 3 the k=0 -> 1 step
  // increases once d(1+d) > 1 (i.e. d above the golden-ratio conjugate),
  // since e^2_{3,1,d} = d(1+d) while e^2_{3,0,d} = 1
  for (int ell : {1, 2})
    for (double d : {0.1, 0.5, 0.9})
      for (int k = 0; k < 20; ++k)
        CHECK(theory::limit_error(ell, k + 1, d) < theory::limit_error(ell, k, d));
  for (double d : {0.1, 0.5, 0.9})
    for (int k = 1; k < 20; ++k)
      CHECK(theory::limit_error(3, k + 1, d) < theory::limit_error(3, k, d));
  CHECK(theory::limit_error(3, 1, 0.5) < theory::limit_error(3, 0, 0.5));
  CHECK(theory::limit_error(3, 1, 0.9) > theory::limit_error(3, 0, 0.9));
}

TEST_CASE("quadrature agrees with the closed forms (acceptance criterion 1 core)") {
  for (int ell : {1, 2, 3})
    for (int di = 1; di <= 9; ++di) {
      const double d = di / 10.0;
      for (int k = 0; k <= 20; ++k) {
        const double closed = theory::limit_error(ell, k, d);
        const double quad = theory::limit_error_quadrature(ell, k, d);
        CHECK(std::abs(quad - closed) <= 1e-10 * std::max(1.0, closed));
        // relative agreement even when the value itself is ~1e-20
        CHECK(std::abs(quad / closed - 1.0) <= 1e-10);
      }
    }
}

TEST_CASE("quadrature: k=0 ell=2 reduces to the MP total mass") {
  for (double d : {0.2, 0.7})
    CHECK(theory::limit_error_quadrature(2, 0, d) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("general-ell quadrature against an independent Simpson oracle") {
  for (auto [ell, k, d] : std::vector<std::tuple<int, int, double>>{
           {4, 2, 0.3}, {5, 3, 0.6}, {0, 2, 0.4}, {-1, 1, 0.5}}) {
    const MpLaw law(d);
    auto integrand = [&](double lam) {
      const double det = theory::limit_char_poly(k, d, lam);
      return std::pow(lam, ell - 2) * det * det * law.density(lam);
    };
    const double oracle =
        oracles::adaptive_simpson(integrand, law.d_minus, law.d_plus, 1e-13);
    const double mine = theory::limit_error_quadrature(ell, k, d);
    CHECK(std::abs(mine * mine - oracle) <= 1e-9 * std::max(1.0, oracle));
  }
}

TEST_CASE("2(k+2) nodes are exact at ell = 3") {
  for (int k : {0, 1, 3, 7, 12}) {
    const double d = 0.45;
    const double coarse = theory::limit_error_quadrature_nodes(3, k, d, 2 * (k + 2));
    const double fine = theory::limit_error_quadrature_nodes(3, k, d, 8 * (k + 2));
    CHECK(coarse == doctest::Approx(fine).epsilon(1e-13));
    CHECK(coarse == doctest::Approx(theory::limit_error(3, k, d)).epsilon(1e-12));
  }
}

TEST_CASE("MP moments") {
  CHECK(theory::mp_moment(0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(theory::mp_moment(1, 0.3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(theory::mp_moment(1, 0.9) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(theory::mp_moment(-1, 0.5) == doctest::Approx(2.0).epsilon(1e-12));
  for (double d : {0.25, 0.75})
    CHECK(theory::mp_moment(-1, d) == doctest::Approx(1.0 / (1.0 - d)).epsilon(1e-11));
  CHECK_THROWS_AS(theory::mp_moment(-1, 1.0), std::invalid_argument);

  // higher and negative moments against the Simpson oracle
  for (int k : {2, 3, -2})
    for (double d : {0.3, 0.6}) {
      const MpLaw law(d);
      const double oracle = oracles::adaptive_simpson(
          [&](double x) { return std::pow(x, k) * law.density(x); }, law.d_minus,
          law.d_plus, 1e-13);
      CHECK(theory::mp_moment(k, d) == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("halting predictions") {
  CHECK(theory::predict_halting(2, 6.627e-8, 0.2).k == 21);
  CHECK(theory::predict_halting(2, 0.9, 0.5).k == 1);
  CHECK(theory::predict_halting(1, 0.9, 0.5).k == 2);
  CHECK_THROWS_AS(theory::predict_halting(2, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(theory::predict_halting(2, 0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(theory::predict_halting(1, 1.5, 0.5), std::invalid_argument);  // eps^2 > 2
  CHECK_THROWS_AS(theory::predict_halting(2, 0.0, 0.5), std::invalid_argument);

  // exact exceptional value flags the two-value regime
  const double eps_exc = theory::limit_error(2, 4, 0.25);
  CHECK(theory::predict_halting(2, eps_exc, 0.25).near_exceptional);
  CHECK_FALSE(theory::predict_halting(2, eps_exc * 1.01, 0.25).near_exceptional);
}

TEST_CASE("halting prediction equals the first-crossing index off the exceptional set") {
  for (double d : {0.2, 0.5, 0.8}) {
    for (int ell : {1, 2}) {
      const double e0 = theory::limit_error(ell, 0, d);
      for (int i = 1; i <= 60; ++i) {
        // geometric grid, offset multiplicatively so it avoids e_{l,k,d}
        const double eps = e0 * std::pow(10.0, -7.0 * i / 60.0) * 1.0037;
        if (!(eps < e0)) continue;
        bool exceptional = false;
        for (int k = 0; k <= 200; ++k)
          if (std::abs(theory::limit_error(ell, k, d) - eps) < 1e-9 * eps)
            exceptional = true;
        if (exceptional) continue;
        int first = -1;
        for (int k = 0; k <= 200; ++k)
          if (theory::limit_error(ell, k, d) < eps) {
            first = k;
            break;
          }
        CHECK(theory::predict_halting(ell, eps, d).k == first);
      }
    }
  }
}

TEST_CASE("exceptional sets") {
  const auto s = theory::exceptional_set(2, 0.25, 3);
  REQUIRE(s.size() == 4);
  CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s[2] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(s[3] == doctest::Approx(0.125).epsilon(1e-14));

  const auto s1 = theory::exceptional_set(1, 0.5, 5);
  CHECK(s1[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  for (std::size_t i = 0; i + 1 < s1.size(); ++i) CHECK(s1[i + 1] < s1[i]);
  CHECK_THROWS_AS(theory::exceptional_set(3, 0.5, 5), std::invalid_argument);
}

TEST_CASE("classical CG bound") {
  CHECK(theory::classical_cg_bound(1.0, 5) == 0.0);
  CHECK(theory::classical_cg_bound(1.0, 0) == 1.0);
  CHECK(theory::classical_cg_bound(9.0, 1) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(theory::classical_cg_bound(100.0, 0) == 1.0);
  CHECK_THROWS_AS(theory::classical_cg_bound(0.5, 2), std::invalid_argument);
  // decreasing in k, in [0, 1]
  for (int k = 0; k < 20; ++k) {
    const double b = theory::classical_cg_bound(25.0, k);
    CHECK(b >= 0.0);
    CHECK(b <= 1.0);
    CHECK(theory::classical_cg_bound(25.0, k + 1) < b);
  }
}

TEST_CASE("theory table values are strictly decreasing") {
  for (int ell : {1, 2, 3}) {
    const auto t = theory::make_theory_table(ell, 0.35, 15);
    REQUIRE(t.values.size() == 16);
    for (std::size_t i = 0; i + 1 < t.values.size(); ++i)
      CHECK(t.values[i + 1] < t.values[i]);
  }
}

TEST_CASE("errors and edge validation") {
  CHECK_THROWS_AS(theory::limit_error(2, -1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(theory::limit_char_poly(2, 1.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(theory::limit_char_poly(2, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS((theory::MpLaw{0.0}), std::invalid_argument);
  CHECK_THROWS_AS((theory::MpLaw{1.2}), std::invalid_argument);
}
