#include "cgw/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include "cgw/simd/kernels.hpp"

namespace cgw::linalg {

namespace {

using std::complex;

double cnorm(const complex<double>& z) { return std::norm(z); }

}  // namespace

Matrix cholesky(const Matrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("cholesky: matrix must be square");
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double s = a(i, j) - simd::dot(l.row(i), l.row(j), j);
      l(i, j) = s / l(j, j);
    }
    const double s = a(i, i) - simd::dot(l.row(i), l.row(i), i);
    if (!(s > 0.0)) throw std::runtime_error("cholesky: matrix is not positive definite");
    l(i, i) = std::sqrt(s);
  }
  return l;
}

CMatrix cholesky(const CMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("cholesky: matrix must be square");
  CMatrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      complex<double> s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / l(j, j);
    }
    double s = a(i, i).real();
    for (std::size_t k = 0; k < i; ++k) s -= cnorm(l(i, k));
    if (!(s > 0.0)) throw std::runtime_error("cholesky: matrix is not positive definite");
    l(i, i) = std::sqrt(s);
  }
  return l;
}

Vec cholesky_solve(const Matrix& l, const Vec& b) {
  const std::size_t n = l.rows();
  Vec y(n);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = (b[i] - simd::dot(l.row(i), y.data(), i)) / l(i, i);
  Vec x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
    x[ii] = s / l(ii, ii);
  }
  return x;
}

CVec cholesky_solve(const CMatrix& l, const CVec& b) {
  const std::size_t n = l.rows();
  CVec y(n);
  for (std::size_t i = 0; i < n; ++i) {
    complex<double> s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  CVec x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    complex<double> s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= std::conj(l(k, ii)) * x[k];
    x[ii] = s / l(ii, ii);
  }
  return x;
}

Vec tridiagonal_solve(const SymmetricTridiagonal& t, const Vec& b) {
  const std::size_t n = t.size();
  Vec d(n), sub(n > 0 ? n - 1 : 0);
  d[0] = t.diag[0];
  if (!(d[0] > 0.0)) throw std::runtime_error("tridiagonal_solve: not positive definite");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    sub[i] = t.offdiag[i] / d[i];
    d[i + 1] = t.diag[i + 1] - sub[i] * t.offdiag[i];
    if (!(d[i + 1] > 0.0))
      throw std::runtime_error("tridiagonal_solve: not positive definite");
  }
  Vec x(b);
  for (std::size_t i = 1; i < n; ++i) x[i] -= sub[i - 1] * x[i - 1];
  for (std::size_t i = 0; i < n; ++i) x[i] /= d[i];
  for (std::size_t ii = n - 1; ii-- > 0;) x[ii] -= sub[ii] * x[ii + 1];
  return x;
}

SymmetricTridiagonal householder_tridiagonalize(const Matrix& a, Matrix* q) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("tridiagonalize: matrix must be square");
  Matrix w = a;
  SymmetricTridiagonal t;
  t.diag.resize(n);
  t.offdiag.assign(n > 1 ? n - 1 : 0, 0.0);
  std::vector<Vec> reflectors;
  std::vector<double> betas;
  if (q) {
    reflectors.reserve(n);
    betas.reserve(n);
  }

  Vec v, p, ww;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;  // trailing size
    v.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) v[i] = w(k + 1 + i, k);
    const double xnorm = std::sqrt(simd::dot(v.data(), v.data(), m));
    t.offdiag[k] = (v[0] >= 0.0) ? -xnorm : xnorm;
    if (xnorm == 0.0) {
      if (q) {
        reflectors.emplace_back();
        betas.push_back(0.0);
      }
      continue;
    }
    v[0] -= t.offdiag[k];
    const double beta = 2.0 / simd::dot(v.data(), v.data(), m);

    // p = beta * W_trailing v ; w = p - (beta/2) (p.v) v
    p.assign(m, 0.0);
    simd::gemv(w.data() + (k + 1) * n + (k + 1), n, m, m, v.data(), p.data());
    for (double& e : p) e *= beta;
    const double gamma = 0.5 * beta * simd::dot(p.data(), v.data(), m);
    ww = p;
    simd::axpy(-gamma, v.data(), ww.data(), m);

    for (std::size_t i = 0; i < m; ++i) {
      double* rowi = w.data() + (k + 1 + i) * n + (k + 1);
      simd::axpy(-v[i], ww.data(), rowi, m);
      simd::axpy(-ww[i], v.data(), rowi, m);
    }
    if (q) {
      reflectors.push_back(v);
      betas.push_back(beta);
    }
  }
  for (std::size_t i = 0; i < n; ++i) t.diag[i] = w(i, i);
  if (n > 1) t.offdiag[n - 2] = w(n - 1, n - 2);

  if (q) {
    // backward accumulation of Q = H_0 H_1 ... so that A = Q T Q^T
    *q = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) (*q)(i, i) = 1.0;
    for (std::size_t kk = reflectors.size(); kk-- > 0;) {
      const Vec& refl = reflectors[kk];
      if (refl.empty()) continue;
      const std::size_t m = refl.size();
      const std::size_t off = n - m;
      Vec z(n, 0.0);
      simd::gemv_t(q->data() + off * n, n, m, n, refl.data(), z.data());
      for (std::size_t i = 0; i < m; ++i)
        simd::axpy(-betas[kk] * refl[i], z.data(), q->row(off + i), n);
    }
  }
  return t;
}

SymmetricTridiagonal householder_tridiagonalize(const CMatrix& a, CMatrix* q) {
  using C = complex<double>;
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("tridiagonalize: matrix must be square");
  CMatrix w = a;
  CVec sub(n > 1 ? n - 1 : 0, C{});
  std::vector<CVec> reflectors;
  std::vector<double> betas;

  CVec v, p, ww;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;
    v.assign(m, C{});
    double xnorm2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      v[i] = w(k + 1 + i, k);
      xnorm2 += cnorm(v[i]);
    }
    const double xnorm = std::sqrt(xnorm2);
    if (xnorm == 0.0) {
      sub[k] = C{};
      reflectors.emplace_back();
      betas.push_back(0.0);
      continue;
    }
    // reflect x to -phase(x0) ||x|| e1
    const C phase = (std::abs(v[0]) == 0.0) ? C{1.0, 0.0} : v[0] / std::abs(v[0]);
    const C alpha = -phase * xnorm;
    sub[k] = alpha;
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (const C& e : v) vnorm2 += cnorm(e);
    const double beta = 2.0 / vnorm2;

    p.assign(m, C{});
    for (std::size_t i = 0; i < m; ++i) {
      C s{};
      for (std::size_t j = 0; j < m; ++j) s += w(k + 1 + i, k + 1 + j) * v[j];
      p[i] = beta * s;
    }
    C pv{};
    for (std::size_t i = 0; i < m; ++i) pv += std::conj(v[i]) * p[i];
    const C gamma = 0.5 * beta * pv;
    ww = p;
    for (std::size_t i = 0; i < m; ++i) ww[i] -= gamma * v[i];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        w(k + 1 + i, k + 1 + j) -= v[i] * std::conj(ww[j]) + ww[i] * std::conj(v[j]);
    reflectors.push_back(v);
    betas.push_back(beta);
  }
  if (n > 1) sub[n - 2] = w(n - 1, n - 2);

  SymmetricTridiagonal t;
  t.diag.resize(n);
  for (std::size_t i = 0; i < n; ++i) t.diag[i] = w(i, i).real();
  t.offdiag.resize(n > 1 ? n - 1 : 0);

  // phase scaling that turns the complex off-diagonal into |sub|
  CVec delta(n, C{1.0, 0.0});
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double mag = std::abs(sub[i]);
    t.offdiag[i] = mag;
    delta[i + 1] = (mag == 0.0) ? delta[i] : delta[i] * (std::conj(sub[i]) / mag);
  }

  if (q) {
    *q = CMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) (*q)(i, i) = C{1.0, 0.0};
    for (std::size_t kk = reflectors.size(); kk-- > 0;) {
      const CVec& refl = reflectors[kk];
      if (refl.empty()) continue;
      const std::size_t m = refl.size();
      const std::size_t off = n - m;
      CVec z(n, C{});
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) z[j] += std::conj(refl[i]) * (*q)(off + i, j);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
          (*q)(off + i, j) -= betas[kk] * refl[i] * z[j];
    }
    // fold in the phase diagonal: A = (Q D^*) T_real (Q D^*)^*
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) (*q)(i, j) *= std::conj(delta[j]);
  }
  return t;
}

}  // namespace cgw::linalg
