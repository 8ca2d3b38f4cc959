#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cgw/matrix.hpp"
#include "cgw/rng.hpp"
#include "cgw/simd/kernels.hpp"

using namespace cgw;

namespace {

Vec random_vec(std::size_t n, rng::Xoshiro256pp& g) {
  Vec v(n);
  for (auto& x : v) x = 2.0 * g.uniform() - 1.0;
  return v;
}

}  // namespace

TEST_CASE("dot/axpy/xpay reference correctness") {
  rng::Xoshiro256pp g(42);
  for (std::size_t n : {0, 1, 2, 3, 7, 8, 15, 16, 17, 33, 100}) {
    Vec x = random_vec(n, g), y = random_vec(n, g);
    double expected = 0.0;
    for (std::size_t i = 0; i < n; ++i) expected += x[i] * y[i];
    CHECK(simd::scalar::dot(x.data(), y.data(), n) == doctest::Approx(expected).epsilon(1e-14));

    Vec y2 = y;
    simd::scalar::axpy(0.7, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y2[i] == doctest::Approx(y[i] + 0.7 * x[i]));

    Vec y3 = y;
    simd::scalar::xpay(x.data(), -0.3, y3.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y3[i] == doctest::Approx(x[i] - 0.3 * y[i]));
  }
}

#if CGW_X86_64
TEST_CASE("avx2 kernels match the scalar reference") {
  if (!(__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))) {
    MESSAGE("avx2 not available on this host; skipping");
    return;
  }
  rng::Xoshiro256pp g(7);
  for (std::size_t n : {1, 3, 4, 5, 8, 13, 16, 31, 64, 257, 1000}) {
    Vec x = random_vec(n, g), y = random_vec(n, g);
    const double tol = 1e-13 * (1.0 + static_cast<double>(n));

    CHECK(std::abs(simd::avx2::dot(x.data(), y.data(), n) -
                   simd::scalar::dot(x.data(), y.data(), n)) <= tol);

    // fused multiply-add differs from mul+add by at most a rounding each
    auto close = [](double a, double b) {
      return std::abs(a - b) <= 4e-16 * (1.0 + std::abs(b));
    };
    Vec ya = y, ys = y;
    simd::avx2::axpy(1.37, x.data(), ya.data(), n);
    simd::scalar::axpy(1.37, x.data(), ys.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close(ya[i], ys[i]));

    ya = y;
    ys = y;
    simd::avx2::xpay(x.data(), -2.1, ya.data(), n);
    simd::scalar::xpay(x.data(), -2.1, ys.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close(ya[i], ys[i]));
  }
}

TEST_CASE("avx2 gemv/gemv_t/syrk match the scalar reference") {
  if (!(__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))) return;
  rng::Xoshiro256pp g(11);
  for (auto [nr, nc] : std::vector<std::pair<std::size_t, std::size_t>>{
           {1, 1}, {2, 5}, {5, 2}, {7, 7}, {13, 29}, {32, 64}, {65, 33}}) {
    Vec a = random_vec(nr * nc, g);
    Vec x = random_vec(nc, g), xr = random_vec(nr, g);
    Vec y1(nr), y2(nr), z1(nc), z2(nc);
    simd::avx2::gemv(a.data(), nc, nr, nc, x.data(), y1.data());
    simd::scalar::gemv(a.data(), nc, nr, nc, x.data(), y2.data());
    simd::avx2::gemv_t(a.data(), nc, nr, nc, xr.data(), z1.data());
    simd::scalar::gemv_t(a.data(), nc, nr, nc, xr.data(), z2.data());
    const double tol = 1e-13 * (1.0 + static_cast<double>(nc + nr));
    for (std::size_t i = 0; i < nr; ++i) CHECK(std::abs(y1[i] - y2[i]) <= tol);
    for (std::size_t j = 0; j < nc; ++j) CHECK(std::abs(z1[j] - z2[j]) <= tol);

    Vec c1(nr * nr), c2(nr * nr);
    simd::avx2::syrk(a.data(), nr, nc, 0.25, c1.data(), nr);
    simd::scalar::syrk(a.data(), nr, nc, 0.25, c2.data(), nr);
    for (std::size_t i = 0; i < nr * nr; ++i) CHECK(std::abs(c1[i] - c2[i]) <= tol);
  }
}
#endif

TEST_CASE("syrk writes a symmetric matrix") {
  rng::Xoshiro256pp g(3);
  const std::size_t n = 17, m = 41;
  Vec a = random_vec(n * m, g);
  Vec c(n * n);
  simd::syrk(a.data(), n, m, 1.0 / m, c.data(), n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) CHECK(c[i * n + j] == c[j * n + i]);
}

TEST_CASE("dispatched kernels agree with the scalar reference") {
  rng::Xoshiro256pp g(19);
  const std::size_t n = 301;
  Vec x = random_vec(n, g), y = random_vec(n, g);
  const double a = simd::dot(x.data(), y.data(), n);
  const double b = simd::scalar::dot(x.data(), y.data(), n);
  CHECK(std::abs(a - b) <= 1e-13 * n);
  MESSAGE("active backend: ", simd::backend_name(simd::active_backend()));
}
