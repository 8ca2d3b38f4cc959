#include "cgw/simd/kernels.hpp"

namespace cgw::simd::scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpay(const double* x, double b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + b * y[i];
}

void gemv(const double* a, std::size_t lda, std::size_t nr, std::size_t nc,
          const double* x, double* y) {
  for (std::size_t i = 0; i < nr; ++i) y[i] = dot(a + i * lda, x, nc);
}

void gemv_t(const double* a, std::size_t lda, std::size_t nr, std::size_t nc,
            const double* x, double* y) {
  for (std::size_t j = 0; j < nc; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < nr; ++i) axpy(x[i], a + i * lda, y, nc);
}

void syrk(const double* a, std::size_t n, std::size_t m, double scale,
          double* c, std::size_t ldc) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = scale * dot(a + i * m, a + j * m, m);
      c[i * ldc + j] = v;
      c[j * ldc + i] = v;
    }
  }
}

}  // namespace cgw::simd::scalar
