#pragma once

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "cgw/matrix.hpp"

namespace cgw::krylov {

// Thrown when CG meets nonpositive curvature p^T W p <= 0, i.e. the
// operator is not positive definite.
class CgBreakdown : public std::runtime_error {
 public:
  CgBreakdown(int k, double curvature);
  int iteration;
  double curvature;
};

// Representation of the system matrix W: dense, tridiagonal, or as the
// factor X with W = scale * X X^T (matvecs without forming the Gram
// matrix). Dense and tridiagonal forms also support direct solves for
// the true solution.
class SystemMatrix {
 public:
  static SystemMatrix dense(Matrix w);
  static SystemMatrix tridiagonal(SymmetricTridiagonal t);
  static SystemMatrix factored(Matrix x, double scale);

  std::size_t dim() const { return dim_; }
  void apply(const double* x, double* y) const;
  Vec apply(const Vec& x) const;

  bool can_solve() const { return kind_ != Form::factored; }
  Vec solve(const Vec& b) const;  // direct solve (Cholesky / LDL^T)

  const Matrix* dense_matrix() const { return kind_ == Form::dense ? &w_ : nullptr; }
  const SymmetricTridiagonal* tridiagonal_matrix() const {
    return kind_ == Form::tridiag ? &t_ : nullptr;
  }

 private:
  enum class Form { dense, tridiag, factored };
  Form kind_ = Form::dense;
  std::size_t dim_ = 0;
  Matrix w_;
  SymmetricTridiagonal t_;
  Matrix x_;
  double scale_ = 1.0;
  mutable Vec scratch_;
  mutable Matrix chol_;  // cached Cholesky factor
};

struct CgState {
  Vec x;
  Vec r;
  Vec p;
  int k = 0;
  double a = 0.0;      // step a_{k-1}
  double bcoef = 0.0;  // coefficient b_{k-1}
};

struct CgOptions {
  int kmax = 0;
  std::optional<double> eps;            // stop once ||r_k|| < eps
  double residual_floor = 1e-13;        // round-off regime guard
};

// Conjugate gradient with x_0 = 0, following the textbook recurrences
// with a_{k-1} = r^*r / (r^* W p) and p_k = r_k - b_{k-1} p_{k-1},
// b_{k-1} = -r_k^*r_k / (r_{k-1}^*r_{k-1}). Returns states k = 0..K.
std::vector<CgState> conjugate_gradient(const SystemMatrix& w, const Vec& b,
                                        const CgOptions& opts);

struct CgStateC {
  CVec x;
  CVec r;
  CVec p;
  int k = 0;
  std::complex<double> a{};
  std::complex<double> bcoef{};
};

// Hermitian positive definite variant (beta = 2 dense systems).
std::vector<CgStateC> conjugate_gradient(const CMatrix& w, const CVec& b,
                                         const CgOptions& opts);

struct LanczosOptions {
  int kmax = 0;
  bool full_reorthogonalization = false;
  double breakdown_rtol = 1e-12;  // relative to a running |T|_1 estimate
};

// Lanczos tridiagonalization from a unit start vector; stops at kmax or
// at breakdown (beta_k below tolerance).
SymmetricTridiagonal lanczos(const SystemMatrix& w, const Vec& y1,
                             const LanczosOptions& opts);
SymmetricTridiagonal lanczos(const CMatrix& w, const CVec& y1,
                             const LanczosOptions& opts);

struct Bidiagonal {
  Vec diag;     // length n, nonnegative
  Vec subdiag;  // length n-1, nonnegative
};

// Householder bidiagonalization of an n x m matrix (m >= n) to a lower
// bidiagonal factor B: B B^T and X X^T share eigenvalues, and the first
// components of eigenvectors are preserved up to sign.
Bidiagonal householder_bidiagonalize(const Matrix& x);

// Per-iteration error norms ||e_k||_{W^ell} plus the recurrence residual
// norms. norms(2, k) is the recomputed true residual ||b - W x_k||, so
// its agreement with residual_norms[k] is a meaningful consistency check.
struct ErrorTrajectory {
  std::vector<int> ell_list;
  std::vector<Vec> norms;  // norms[i][k] for ell_list[i]
  Vec residual_norms;
  int kmax = 0;

  const Vec& norms_for(int ell) const;
};

// d_param is the aspect ratio of the generating ensemble; it gates the
// l < 2 norms, which have no limit at d = 1.
ErrorTrajectory cg_error_trajectory(const SystemMatrix& w, const Vec& b, int kmax,
                                    std::span<const int> ell_list, double d_param);
ErrorTrajectory cg_error_trajectory(const CMatrix& w, const CVec& b, int kmax,
                                    std::span<const int> ell_list, double d_param);

// min{k : ||e_k||_{W^ell} < eps} (strict), or nullopt when no k <= kmax
// qualifies.
std::optional<int> halting_time(const ErrorTrajectory& traj, int ell, double eps);

}  // namespace cgw::krylov
