#include "cgw/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cgw/linalg.hpp"
#include "cgw/simd/kernels.hpp"
#include "cgw/spectral.hpp"

namespace cgw::krylov {

namespace {

using std::complex;

double norm2(const Vec& v) { return std::sqrt(simd::dot(v.data(), v.data(), v.size())); }

complex<double> cdot(const CVec& x, const CVec& y) {
  complex<double> s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

double cnorm2(const CVec& v) { return std::sqrt(std::abs(cdot(v, v))); }

void capply(const CMatrix& w, const CVec& x, CVec& y) {
  const std::size_t n = w.rows();
  for (std::size_t i = 0; i < n; ++i) {
    complex<double> s{};
    const complex<double>* row = w.row(i);
    for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

}  // namespace

CgBreakdown::CgBreakdown(int k, double curv)
    : std::runtime_error("conjugate gradient breakdown at iteration " + std::to_string(k) +
                         ": p^T W p = " + std::to_string(curv)),
      iteration(k),
      curvature(curv) {}

SystemMatrix SystemMatrix::dense(Matrix w) {
  SystemMatrix s;
  s.kind_ = Form::dense;
  s.dim_ = w.rows();
  s.w_ = std::move(w);
  return s;
}

SystemMatrix SystemMatrix::tridiagonal(SymmetricTridiagonal t) {
  SystemMatrix s;
  s.kind_ = Form::tridiag;
  s.dim_ = t.size();
  s.t_ = std::move(t);
  return s;
}

SystemMatrix SystemMatrix::factored(Matrix x, double scale) {
  SystemMatrix s;
  s.kind_ = Form::factored;
  s.dim_ = x.rows();
  s.x_ = std::move(x);
  s.scale_ = scale;
  return s;
}

void SystemMatrix::apply(const double* x, double* y) const {
  switch (kind_) {
    case Form::dense:
      simd::gemv(w_.data(), dim_, dim_, dim_, x, y);
      break;
    case Form::tridiag:
      t_.apply(x, y);
      break;
    case Form::factored: {
      const std::size_t m = x_.cols();
      scratch_.resize(m);
      simd::gemv_t(x_.data(), m, dim_, m, x, scratch_.data());
      simd::gemv(x_.data(), m, dim_, m, scratch_.data(), y);
      for (std::size_t i = 0; i < dim_; ++i) y[i] *= scale_;
      break;
    }
  }
}

Vec SystemMatrix::apply(const Vec& x) const {
  Vec y(dim_);
  apply(x.data(), y.data());
  return y;
}

Vec SystemMatrix::solve(const Vec& b) const {
  switch (kind_) {
    case Form::dense:
      if (chol_.rows() == 0) chol_ = linalg::cholesky(w_);
      return linalg::cholesky_solve(chol_, b);
    case Form::tridiag:
      return linalg::tridiagonal_solve(t_, b);
    case Form::factored:
      throw std::logic_error("SystemMatrix: factored form has no direct solve");
  }
  return {};
}

std::vector<CgState> conjugate_gradient(const SystemMatrix& w, const Vec& b,
                                        const CgOptions& opts) {
  const std::size_t n = w.dim();
  if (b.size() != n) throw std::invalid_argument("conjugate_gradient: dimension mismatch");
  std::vector<CgState> states;
  states.reserve(opts.kmax + 1);

  CgState st;
  st.x.assign(n, 0.0);
  st.r = b;
  st.p = b;
  states.push_back(st);

  Vec wp(n);
  double rr = simd::dot(st.r.data(), st.r.data(), n);
  for (int k = 1; k <= opts.kmax; ++k) {
    const double rnorm_prev = std::sqrt(rr);
    if (rnorm_prev == 0.0) break;  // clean termination
    if (opts.eps && rnorm_prev < *opts.eps) break;
    if (rnorm_prev < opts.residual_floor) break;

    w.apply(st.p.data(), wp.data());
    const double curvature = simd::dot(st.p.data(), wp.data(), n);
    if (!(curvature > 0.0)) throw CgBreakdown(k, curvature);
    const double rwp = simd::dot(st.r.data(), wp.data(), n);
    const double a = rr / rwp;

    simd::axpy(a, st.p.data(), st.x.data(), n);
    simd::axpy(-a, wp.data(), st.r.data(), n);
    const double rr_new = simd::dot(st.r.data(), st.r.data(), n);
    const double bcoef = -rr_new / rr;
    simd::xpay(st.r.data(), -bcoef, st.p.data(), n);  // p = r - b p

    rr = rr_new;
    st.k = k;
    st.a = a;
    st.bcoef = bcoef;
    states.push_back(st);
  }
  return states;
}

std::vector<CgStateC> conjugate_gradient(const CMatrix& w, const CVec& b,
                                         const CgOptions& opts) {
  const std::size_t n = w.rows();
  if (b.size() != n) throw std::invalid_argument("conjugate_gradient: dimension mismatch");
  std::vector<CgStateC> states;
  states.reserve(opts.kmax + 1);

  CgStateC st;
  st.x.assign(n, complex<double>{});
  st.r = b;
  st.p = b;
  states.push_back(st);

  CVec wp(n);
  double rr = std::abs(cdot(st.r, st.r));
  for (int k = 1; k <= opts.kmax; ++k) {
    const double rnorm_prev = std::sqrt(rr);
    if (rnorm_prev == 0.0) break;
    if (opts.eps && rnorm_prev < *opts.eps) break;
    if (rnorm_prev < opts.residual_floor) break;

    capply(w, st.p, wp);
    const double curvature = cdot(st.p, wp).real();
    if (!(curvature > 0.0)) throw CgBreakdown(k, curvature);
    const complex<double> rwp = cdot(st.r, wp);
    const complex<double> a = rr / rwp;

    for (std::size_t i = 0; i < n; ++i) st.x[i] += a * st.p[i];
    for (std::size_t i = 0; i < n; ++i) st.r[i] -= a * wp[i];
    const double rr_new = std::abs(cdot(st.r, st.r));
    const complex<double> bcoef = -rr_new / rr;
    for (std::size_t i = 0; i < n; ++i) st.p[i] = st.r[i] - bcoef * st.p[i];

    rr = rr_new;
    st.k = k;
    st.a = a;
    st.bcoef = bcoef;
    states.push_back(st);
  }
  return states;
}

namespace {

void check_unit(double norm) {
  if (std::abs(norm - 1.0) > 1e-12)
    throw std::invalid_argument("lanczos: start vector must be a unit vector");
}

}  // namespace

SymmetricTridiagonal lanczos(const SystemMatrix& w, const Vec& y1,
                             const LanczosOptions& opts) {
  const std::size_t n = w.dim();
  if (y1.size() != n) throw std::invalid_argument("lanczos: dimension mismatch");
  check_unit(norm2(y1));

  SymmetricTridiagonal t;
  std::vector<Vec> basis;  // kept for reorthogonalization
  Vec y = y1, yprev(n, 0.0), v(n);
  double beta_prev = 0.0;
  double norm_est = 0.0;
  const int kmax = std::min<int>(opts.kmax, static_cast<int>(n));

  for (int k = 1; k <= kmax; ++k) {
    if (opts.full_reorthogonalization) basis.push_back(y);
    w.apply(y.data(), v.data());
    simd::axpy(-beta_prev, yprev.data(), v.data(), n);
    const double alpha = simd::dot(v.data(), y.data(), n);
    t.diag.push_back(alpha);
    if (k == kmax) break;
    simd::axpy(-alpha, y.data(), v.data(), n);
    if (opts.full_reorthogonalization) {
      for (const Vec& q : basis) {
        const double c = simd::dot(q.data(), v.data(), n);
        simd::axpy(-c, q.data(), v.data(), n);
      }
    }
    const double beta = norm2(v);
    norm_est = std::max(norm_est, std::abs(alpha) + beta_prev + beta);
    if (beta <= opts.breakdown_rtol * std::max(norm_est, 1e-300)) break;
    t.offdiag.push_back(beta);
    yprev = y;
    for (std::size_t i = 0; i < n; ++i) y[i] = v[i] / beta;
    beta_prev = beta;
  }
  return t;
}

SymmetricTridiagonal lanczos(const CMatrix& w, const CVec& y1,
                             const LanczosOptions& opts) {
  const std::size_t n = w.rows();
  if (y1.size() != n) throw std::invalid_argument("lanczos: dimension mismatch");
  check_unit(cnorm2(y1));

  SymmetricTridiagonal t;
  std::vector<CVec> basis;
  CVec y = y1, yprev(n, complex<double>{}), v(n);
  double beta_prev = 0.0;
  double norm_est = 0.0;
  const int kmax = std::min<int>(opts.kmax, static_cast<int>(n));

  for (int k = 1; k <= kmax; ++k) {
    if (opts.full_reorthogonalization) basis.push_back(y);
    capply(w, y, v);
    for (std::size_t i = 0; i < n; ++i) v[i] -= beta_prev * yprev[i];
    const double alpha = cdot(v, y).real();
    t.diag.push_back(alpha);
    if (k == kmax) break;
    for (std::size_t i = 0; i < n; ++i) v[i] -= alpha * y[i];
    if (opts.full_reorthogonalization) {
      for (const CVec& q : basis) {
        const complex<double> c = cdot(q, v);
        for (std::size_t i = 0; i < n; ++i) v[i] -= c * q[i];
      }
    }
    const double beta = cnorm2(v);
    norm_est = std::max(norm_est, std::abs(alpha) + beta_prev + beta);
    if (beta <= opts.breakdown_rtol * std::max(norm_est, 1e-300)) break;
    t.offdiag.push_back(beta);
    yprev = y;
    for (std::size_t i = 0; i < n; ++i) y[i] = v[i] / beta;
    beta_prev = beta;
  }
  return t;
}

Bidiagonal householder_bidiagonalize(const Matrix& x) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  if (m < n) throw std::invalid_argument("householder_bidiagonalize: requires m >= n");
  Matrix a = x;

  Vec w, z;
  for (std::size_t j = 0; j < n; ++j) {
    // right reflector: clear row j beyond column j
    const std::size_t len = m - j;
    w.assign(len, 0.0);
    for (std::size_t t = 0; t < len; ++t) w[t] = a(j, j + t);
    const double rnorm = std::sqrt(simd::dot(w.data(), w.data(), len));
    if (rnorm > 0.0 && len > 1) {
      w[0] += std::copysign(rnorm, w[0]);
      const double beta = 2.0 / simd::dot(w.data(), w.data(), len);
      for (std::size_t i = j; i < n; ++i) {
        double* row = a.row(i) + j;
        const double c = beta * simd::dot(row, w.data(), len);
        simd::axpy(-c, w.data(), row, len);
      }
    }
    // left reflector: clear column j below row j+1
    if (j + 2 < n) {
      const std::size_t rows = n - j - 1;
      z.assign(rows, 0.0);
      for (std::size_t t = 0; t < rows; ++t) z[t] = a(j + 1 + t, j);
      const double cnorm = std::sqrt(simd::dot(z.data(), z.data(), rows));
      if (cnorm > 0.0) {
        z[0] += std::copysign(cnorm, z[0]);
        const double beta = 2.0 / simd::dot(z.data(), z.data(), rows);
        const std::size_t width = m - j;
        w.assign(width, 0.0);
        simd::gemv_t(a.data() + (j + 1) * m + j, m, rows, width, z.data(), w.data());
        for (std::size_t i = 0; i < rows; ++i)
          simd::axpy(-beta * z[i], w.data(), a.row(j + 1 + i) + j, width);
      }
    }
  }

  Bidiagonal b;
  b.diag.resize(n);
  b.subdiag.resize(n > 0 ? n - 1 : 0);
  for (std::size_t j = 0; j < n; ++j) {
    b.diag[j] = a(j, j);
    if (j + 1 < n) b.subdiag[j] = a(j + 1, j);
  }
  // orthogonal sign flips (rows/columns of +-1) make every entry nonneg
  double row_sign = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double col_sign = (row_sign * b.diag[j] < 0.0) ? -1.0 : 1.0;
    b.diag[j] *= row_sign * col_sign;
    if (j + 1 < n) {
      if (col_sign * b.subdiag[j] < 0.0) {
        b.subdiag[j] *= -col_sign;
        row_sign = -1.0;
      } else {
        b.subdiag[j] *= col_sign;
        row_sign = 1.0;
      }
    }
  }
  return b;
}

const Vec& ErrorTrajectory::norms_for(int ell) const {
  for (std::size_t i = 0; i < ell_list.size(); ++i)
    if (ell_list[i] == ell) return norms[i];
  throw std::invalid_argument("ErrorTrajectory: norm for requested ell was not tracked");
}

namespace {

// ||e||^2_{W^ell} for ell >= 0 via repeated matvecs: W^s e pairs.
double norm_sq_nonneg_ell(const SystemMatrix& w, const Vec& e, int ell, Vec& t0, Vec& t1) {
  if (ell == 0) return simd::dot(e.data(), e.data(), e.size());
  t0 = e;
  int s = 0;
  while (2 * (s + 1) <= ell) {
    w.apply(t0.data(), t1.data());
    std::swap(t0, t1);
    ++s;
  }
  if (2 * s == ell) return simd::dot(t0.data(), t0.data(), t0.size());
  w.apply(t0.data(), t1.data());
  return simd::dot(t0.data(), t1.data(), t0.size());
}

}  // namespace

ErrorTrajectory cg_error_trajectory(const SystemMatrix& w, const Vec& b, int kmax,
                                    std::span<const int> ell_list, double d_param) {
  const std::size_t n = w.dim();
  bool need_spectral = false;
  for (int ell : ell_list) {
    if (ell < 2 && d_param == 1.0)
      throw std::invalid_argument(
          "cg_error_trajectory: norms with ell < 2 are undefined at d = 1");
    if (ell < 0) need_spectral = true;
  }
  if (!w.can_solve())
    throw std::invalid_argument("cg_error_trajectory: representation lacks a direct solve");

  const Vec x_true = w.solve(b);
  CgOptions opts;
  opts.kmax = kmax;
  const auto states = conjugate_gradient(w, b, opts);

  // spectral data only when negative powers are requested
  Vec eigs;
  Matrix basis;
  if (need_spectral) {
    const Matrix* dense = w.dense_matrix();
    Matrix converted;
    if (!dense) {
      const SymmetricTridiagonal* t = w.tridiagonal_matrix();
      converted = Matrix(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        converted(i, i) = t->diag[i];
        if (i + 1 < n) {
          converted(i, i + 1) = t->offdiag[i];
          converted(i + 1, i) = t->offdiag[i];
        }
      }
      dense = &converted;
    }
    auto ed = spectral::eigen_dense(*dense, true);
    eigs = std::move(ed.eigenvalues);
    basis = std::move(*ed.vectors);
  }

  ErrorTrajectory traj;
  traj.ell_list.assign(ell_list.begin(), ell_list.end());
  traj.kmax = static_cast<int>(states.size()) - 1;
  traj.norms.assign(ell_list.size(), Vec(states.size(), 0.0));
  traj.residual_norms.resize(states.size());

  Vec e(n), t0, t1(n), coeffs(n);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const CgState& st = states[k];
    traj.residual_norms[k] = norm2(st.r);
    for (std::size_t i = 0; i < n; ++i) e[i] = x_true[i] - st.x[i];
    for (std::size_t li = 0; li < traj.ell_list.size(); ++li) {
      const int ell = traj.ell_list[li];
      double val_sq;
      if (ell == 1) {
        // e^T W e = e . r with r = W e (recurrence residual)
        val_sq = simd::dot(e.data(), st.r.data(), n);
      } else if (ell == 2) {
        // recomputed true residual b - W x_k
        w.apply(st.x.data(), t1.data());
        for (std::size_t i = 0; i < n; ++i) t1[i] = b[i] - t1[i];
        val_sq = simd::dot(t1.data(), t1.data(), n);
      } else if (ell >= 0) {
        val_sq = norm_sq_nonneg_ell(w, e, ell, t0, t1);
      } else {
        simd::gemv_t(basis.data(), n, n, n, e.data(), coeffs.data());
        val_sq = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          val_sq += std::pow(eigs[j], ell) * coeffs[j] * coeffs[j];
      }
      traj.norms[li][k] = std::sqrt(std::max(0.0, val_sq));
    }
  }
  return traj;
}

ErrorTrajectory cg_error_trajectory(const CMatrix& w, const CVec& b, int kmax,
                                    std::span<const int> ell_list, double d_param) {
  const std::size_t n = w.rows();
  bool need_spectral = false;
  for (int ell : ell_list) {
    if (ell < 2 && d_param == 1.0)
      throw std::invalid_argument(
          "cg_error_trajectory: norms with ell < 2 are undefined at d = 1");
    if (ell < 0) need_spectral = true;
  }

  const CMatrix chol = linalg::cholesky(w);
  const CVec x_true = linalg::cholesky_solve(chol, b);
  CgOptions opts;
  opts.kmax = kmax;
  const auto states = conjugate_gradient(w, b, opts);

  Vec eigs;
  CMatrix basis;
  if (need_spectral) {
    auto ed = spectral::eigen_dense(w, true);
    eigs = std::move(ed.eigenvalues);
    basis = std::move(*ed.cvectors);
  }

  ErrorTrajectory traj;
  traj.ell_list.assign(ell_list.begin(), ell_list.end());
  traj.kmax = static_cast<int>(states.size()) - 1;
  traj.norms.assign(ell_list.size(), Vec(states.size(), 0.0));
  traj.residual_norms.resize(states.size());

  CVec e(n), t0(n), t1(n);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const CgStateC& st = states[k];
    traj.residual_norms[k] = cnorm2(st.r);
    for (std::size_t i = 0; i < n; ++i) e[i] = x_true[i] - st.x[i];
    for (std::size_t li = 0; li < traj.ell_list.size(); ++li) {
      const int ell = traj.ell_list[li];
      double val_sq;
      if (ell == 0) {
        val_sq = std::abs(cdot(e, e));
      } else if (ell == 1) {
        val_sq = cdot(e, st.r).real();
      } else if (ell == 2) {
        capply(w, st.x, t1);
        for (std::size_t i = 0; i < n; ++i) t1[i] = b[i] - t1[i];
        val_sq = std::abs(cdot(t1, t1));
      } else if (ell > 0) {
        t0 = e;
        int s = 0;
        while (2 * (s + 1) <= ell) {
          capply(w, t0, t1);
          std::swap(t0, t1);
          ++s;
        }
        if (2 * s == ell) {
          val_sq = std::abs(cdot(t0, t0));
        } else {
          capply(w, t0, t1);
          val_sq = cdot(t0, t1).real();
        }
      } else {
        val_sq = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          complex<double> c{};
          for (std::size_t i = 0; i < n; ++i) c += std::conj(basis(i, j)) * e[i];
          val_sq += std::pow(eigs[j], ell) * std::norm(c);
        }
      }
      traj.norms[li][k] = std::sqrt(std::max(0.0, val_sq));
    }
  }
  return traj;
}

std::optional<int> halting_time(const ErrorTrajectory& traj, int ell, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("halting_time: eps must be positive");
  const Vec& norms = traj.norms_for(ell);
  for (std::size_t k = 0; k < norms.size(); ++k)
    if (norms[k] < eps) return static_cast<int>(k);
  return std::nullopt;
}

}  // namespace cgw::krylov
