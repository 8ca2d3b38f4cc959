#include "cgw/simd/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace cgw::simd {

namespace {

Backend detect() {
  if (const char* env = std::getenv("CGW_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
#if CGW_X86_64
    if (std::strcmp(env, "avx2") == 0) return Backend::avx2;
#endif
  }
#if CGW_X86_64
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return Backend::avx2;
#endif
  return Backend::scalar;
}

}  // namespace

Backend active_backend() {
  static const Backend b = detect();
  return b;
}

std::string_view backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

#if CGW_X86_64
#define CGW_DISPATCH(fn, ...) \
  (active_backend() == Backend::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define CGW_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

double dot(const double* x, const double* y, std::size_t n) {
  return CGW_DISPATCH(dot, x, y, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  CGW_DISPATCH(axpy, a, x, y, n);
}

void xpay(const double* x, double b, double* y, std::size_t n) {
  CGW_DISPATCH(xpay, x, b, y, n);
}

void gemv(const double* a, std::size_t lda, std::size_t nr, std::size_t nc,
          const double* x, double* y) {
  CGW_DISPATCH(gemv, a, lda, nr, nc, x, y);
}

void gemv_t(const double* a, std::size_t lda, std::size_t nr, std::size_t nc,
            const double* x, double* y) {
  CGW_DISPATCH(gemv_t, a, lda, nr, nc, x, y);
}

void syrk(const double* a, std::size_t n, std::size_t m, double scale,
          double* c, std::size_t ldc) {
  CGW_DISPATCH(syrk, a, n, m, scale, c, ldc);
}

#undef CGW_DISPATCH

}  // namespace cgw::simd
