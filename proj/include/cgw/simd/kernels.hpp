#pragma once

#include <cstddef>
#include <string_view>

// Double-precision inner-loop kernels used by the solvers and samplers.
// Each kernel has a scalar reference implementation and, on x86-64 with
// AVX2+FMA, a vectorized variant. The dispatched entry points below pick
// the backend once at startup; CGW_SIMD=scalar|avx2 in the environment
// overrides detection.
//
// Matrices are row-major with an explicit leading dimension (lda), so the
// same kernels serve full matrices and trailing submatrices.

namespace cgw::simd {

enum class Backend { scalar, avx2 };

Backend active_backend();
std::string_view backend_name(Backend b);

// y . x
double dot(const double* x, const double* y, std::size_t n);

// y += a * x
void axpy(double a, const double* x, double* y, std::size_t n);

// y = x + b * y
void xpay(const double* x, double b, double* y, std::size_t n);

// y = A x   (A is nr x nc, row-major, leading dimension lda)
void gemv(const double* a, std::size_t lda, std::size_t nr, std::size_t nc,
          const double* x, double* y);

// y = A^T x (y has length nc; accumulated row-wise so A is streamed once)
void gemv_t(const double* a, std::size_t lda, std::size_t nr, std::size_t nc,
            const double* x, double* y);

// C = scale * A A^T  (A is n x m, C is n x n with leading dimension ldc;
// both triangles of C are written so downstream matvecs are plain gemv)
void syrk(const double* a, std::size_t n, std::size_t m, double scale,
          double* c, std::size_t ldc);

// Reference implementations, exposed so equivalence tests can pin the
// vectorized backend against the scalar one.
namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void xpay(const double* x, double b, double* y, std::size_t n);
void gemv(const double* a, std::size_t lda, std::size_t nr, std::size_t nc,
          const double* x, double* y);
void gemv_t(const double* a, std::size_t lda, std::size_t nr, std::size_t nc,
            const double* x, double* y);
void syrk(const double* a, std::size_t n, std::size_t m, double scale,
          double* c, std::size_t ldc);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define CGW_X86_64 1
#else
#define CGW_X86_64 0
#endif

#if CGW_X86_64
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void xpay(const double* x, double b, double* y, std::size_t n);
void gemv(const double* a, std::size_t lda, std::size_t nr, std::size_t nc,
          const double* x, double* y);
void gemv_t(const double* a, std::size_t lda, std::size_t nr, std::size_t nc,
            const double* x, double* y);
void syrk(const double* a, std::size_t n, std::size_t m, double scale,
          double* c, std::size_t ldc);
}  // namespace avx2
#endif

}  // namespace cgw::simd
