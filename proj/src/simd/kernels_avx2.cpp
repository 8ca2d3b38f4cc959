#include "cgw/simd/kernels.hpp"

#if CGW_X86_64

#include <immintrin.h>

namespace cgw::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double s = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i + 4,
                     _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpay(const double* x, double b, double* y, std::size_t n) {
  const __m256d bv = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(bv, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = x[i] + b * y[i];
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

namespace {

// 4x2 block of C += A[i0..i0+ib) . A[j0..j0+2)^T, vectorized over the m axis.
inline void syrk_block(const double* a, std::size_t m, std::size_t i0, std::size_t ib,
                       std::size_t j0, double scale, double* c, std::size_t ldc) {
  __m256d acc[4][2];
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t s = 0; s < 2; ++s) acc[r][s] = _mm256_setzero_pd();
  const double* rows[4];
  for (std::size_t r = 0; r < ib; ++r) rows[r] = a + (i0 + r) * m;
  const double* b0 = a + j0 * m;
  const double* b1 = a + (j0 + 1) * m;
  std::size_t t = 0;
  for (; t + 4 <= m; t += 4) {
    const __m256d vb0 = _mm256_loadu_pd(b0 + t);
    const __m256d vb1 = _mm256_loadu_pd(b1 + t);
    for (std::size_t r = 0; r < ib; ++r) {
      const __m256d va = _mm256_loadu_pd(rows[r] + t);
      acc[r][0] = _mm256_fmadd_pd(va, vb0, acc[r][0]);
      acc[r][1] = _mm256_fmadd_pd(va, vb1, acc[r][1]);
    }
  }
  for (std::size_t r = 0; r < ib; ++r) {
    double s0 = hsum(acc[r][0]);
    double s1 = hsum(acc[r][1]);
    for (std::size_t u = t; u < m; ++u) {
      s0 += rows[r][u] * b0[u];
      s1 += rows[r][u] * b1[u];
    }
    c[(i0 + r) * ldc + j0] = scale * s0;
    c[(i0 + r) * ldc + j0 + 1] = scale * s1;
  }
}

}  // namespace

void syrk(const double* a, std::size_t n, std::size_t m, double scale,
          double* c, std::size_t ldc) {
  for (std::size_t i0 = 0; i0 < n; i0 += 4) {
    const std::size_t ib = (n - i0 < 4) ? n - i0 : 4;
    std::size_t j0 = 0;
    for (; j0 + 2 <= i0; j0 += 2) syrk_block(a, m, i0, ib, j0, scale, c, ldc);
    // diagonal block: remaining pairs with j <= i
    for (std::size_t i = i0; i < i0 + ib; ++i)
      for (std::size_t j = j0; j <= i; ++j)
        c[i * ldc + j] = scale * dot(a + i * m, a + j * m, m);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) c[i * ldc + j] = c[j * ldc + i];
}

}  // namespace cgw::simd::avx2

#endif  // CGW_X86_64
