#include "cgw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cgw/linalg.hpp"

namespace cgw::spectral {

namespace {

// Implicit-shift QL on (d, e). Rotations are optionally carried on the
// rows of `accum` (columns of which become eigenvectors) and on the row
// vector `z` (which tracks first components). Results come back sorted
// ascending with the carried data permuted to match.
void ql_implicit_shift(Vec& d, Vec& e, Matrix* accum, Vec* z) {
  const std::size_t n = d.size();
  if (n == 0) return;
  e.resize(n, 0.0);
  const double eps = std::numeric_limits<double>::epsilon();

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    for (;;) {
      std::size_t m = l;
      while (m + 1 < n) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
        ++m;
      }
      if (m == l) break;
      if (++iter > 60) throw std::runtime_error("eigen: QL iteration did not converge");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i1 = m; i1-- > l;) {
        double f = s * e[i1];
        const double b = c * e[i1];
        r = std::hypot(f, g);
        e[i1 + 1] = r;
        if (r == 0.0) {
          d[i1 + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i1 + 1] - p;
        r = (d[i1] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i1 + 1] = g + p;
        g = c * r - b;
        if (accum) {
          for (std::size_t kk = 0; kk < accum->rows(); ++kk) {
            f = (*accum)(kk, i1 + 1);
            (*accum)(kk, i1 + 1) = s * (*accum)(kk, i1) + c * f;
            (*accum)(kk, i1) = c * (*accum)(kk, i1) - s * f;
          }
        }
        if (z) {
          f = (*z)[i1 + 1];
          (*z)[i1 + 1] = s * (*z)[i1] + c * f;
          (*z)[i1] = c * (*z)[i1] - s * f;
        }
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
}

std::vector<std::size_t> sort_permutation(const Vec& d) {
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  return idx;
}

double max_abs(const Matrix& w) {
  double m = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j) m = std::max(m, std::abs(w(i, j)));
  return m;
}

}  // namespace

SpectralMeasure SpectralMeasure::from_atoms(Vec atoms, Vec weights) {
  if (atoms.size() != weights.size())
    throw std::invalid_argument("SpectralMeasure: atom/weight length mismatch");
  if (atoms.empty()) throw std::invalid_argument("SpectralMeasure: empty measure");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-8)
    throw std::invalid_argument("SpectralMeasure: weights must sum to 1");

  auto perm = sort_permutation(atoms);
  Vec p(atoms.size()), w(atoms.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    p[i] = atoms[perm[i]];
    w[i] = weights[perm[i]] / total;
  }

  // merge numerically coincident atoms; KS evaluation needs them distinct
  const double diameter = p.back() - p.front();
  const double tol = 1e-12 * std::max(diameter, 1e-300);
  SpectralMeasure out;
  out.points.push_back(p[0]);
  out.weights.push_back(w[0]);
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] - out.points.back() <= tol) {
      out.weights.back() += w[i];
    } else {
      out.points.push_back(p[i]);
      out.weights.push_back(w[i]);
    }
  }
  return out;
}

SpectralMeasure SpectralMeasure::uniform(Vec atoms) {
  Vec w(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
  return from_atoms(std::move(atoms), std::move(w));
}

TridiagonalEigen eigen_tridiagonal(const SymmetricTridiagonal& t) {
  const std::size_t n = t.size();
  if (n == 0) throw std::invalid_argument("eigen_tridiagonal: empty matrix");
  Vec d = t.diag;
  Vec e = t.offdiag;
  Vec z(n, 0.0);
  z[0] = 1.0;
  ql_implicit_shift(d, e, nullptr, &z);
  auto perm = sort_permutation(d);
  TridiagonalEigen out;
  out.eigenvalues.resize(n);
  out.first_components_squared.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.eigenvalues[i] = d[perm[i]];
    out.first_components_squared[i] = z[perm[i]] * z[perm[i]];
  }
  return out;
}

DenseEigen eigen_dense(const Matrix& w, bool with_vectors) {
  const std::size_t n = w.rows();
  if (w.cols() != n) throw std::invalid_argument("eigen_dense: matrix must be square");
  const double scale = std::max(max_abs(w), 1e-300);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(w(i, j) - w(j, i)) > 1e-12 * scale)
        throw std::invalid_argument("eigen_dense: input is not symmetric");

  Matrix q;
  auto t = linalg::householder_tridiagonalize(w, with_vectors ? &q : nullptr);
  Vec d = t.diag;
  Vec e = t.offdiag;
  ql_implicit_shift(d, e, with_vectors ? &q : nullptr, nullptr);
  auto perm = sort_permutation(d);

  DenseEigen out;
  out.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = d[perm[i]];
  if (with_vectors) {
    Matrix v(n, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) v(i, j) = q(i, perm[j]);
    out.vectors = std::move(v);
  }
  return out;
}

DenseEigen eigen_dense(const CMatrix& w, bool with_vectors) {
  const std::size_t n = w.rows();
  if (w.cols() != n) throw std::invalid_argument("eigen_dense: matrix must be square");
  double scale = 1e-300;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(w(i, j)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (std::abs(w(i, j) - std::conj(w(j, i))) > 1e-12 * scale)
        throw std::invalid_argument("eigen_dense: input is not Hermitian");

  CMatrix qc;
  auto t = linalg::householder_tridiagonalize(w, with_vectors ? &qc : nullptr);
  Vec d = t.diag;
  Vec e = t.offdiag;
  Matrix v;
  if (with_vectors) {
    v = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;
  }
  ql_implicit_shift(d, e, with_vectors ? &v : nullptr, nullptr);
  auto perm = sort_permutation(d);

  DenseEigen out;
  out.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = d[perm[i]];
  if (with_vectors) {
    // eigenvectors of W are (Q_c) (real eigenvectors of T)
    CMatrix u(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::complex<double> s{};
        for (std::size_t k = 0; k < n; ++k) s += qc(i, k) * v(k, perm[j]);
        u(i, j) = s;
      }
    out.cvectors = std::move(u);
  }
  return out;
}

double ks_distance(const SpectralMeasure& mu, const SpectralMeasure& nu) {
  double fmu = 0.0, fnu = 0.0, best = 0.0;
  std::size_t i = 0, j = 0;
  while (i < mu.points.size() || j < nu.points.size()) {
    double x;
    if (j >= nu.points.size())
      x = mu.points[i];
    else if (i >= mu.points.size())
      x = nu.points[j];
    else
      x = std::min(mu.points[i], nu.points[j]);
    while (i < mu.points.size() && mu.points[i] == x) fmu += mu.weights[i++];
    while (j < nu.points.size() && nu.points[j] == x) fnu += nu.weights[j++];
    best = std::max(best, std::abs(fmu - fnu));
  }
  return best;
}

double ks_distance(const std::function<double(double)>& cdf, const SpectralMeasure& nu) {
  double cum = 0.0, best = 0.0;
  for (std::size_t j = 0; j < nu.points.size(); ++j) {
    const double f = cdf(nu.points[j]);
    best = std::max(best, std::abs(f - cum));  // left limit of the atomic CDF
    cum += nu.weights[j];
    best = std::max(best, std::abs(f - cum));  // right limit
  }
  return best;
}

}  // namespace cgw::spectral
