#pragma once

#include <vector>

#include "cgw/matrix.hpp"

// Deterministic limit objects: the Marchenko-Pastur law, the limiting
// Jacobi matrix of bidiagonalized Wishart matrices, the limiting error
// norms e(l,k,d) of conjugate gradient iterates, and the deterministic
// halting-time predictions derived from them.

namespace cgw::theory {

// Marchenko-Pastur law with ratio parameter d in (0,1]; support edges
// d_minus = (1-sqrt(d))^2, d_plus = (1+sqrt(d))^2.
struct MpLaw {
  explicit MpLaw(double d);

  double density(double x) const;  // 0 outside [d_minus, d_plus]
  double cdf(double x) const;      // closed form

  double d;
  double d_minus;
  double d_plus;
};

// Second-kind Chebyshev polynomial U_k(x), three-term recurrence.
double chebyshev_u(int k, double x);

// Upper-left k x k block of the limiting Jacobi matrix: diagonal
// (1, 1+d, ..., 1+d), off-diagonal sqrt(d).
struct LimitJacobi {
  int k;
  double d;
  Matrix dense() const;
};

// det(LimitJacobi(k,d) - lambda I) in the Chebyshev form
// d^{k/2} [U_k(-x) - sqrt(d) U_{k-1}(-x)], x = (lambda-1-d)/(2 sqrt(d)).
double limit_char_poly(int k, double d, double lambda);

// Limiting error norm e_{l,k,d}. Closed forms for l in {1,2,3}:
//   e^2 = d^k/(1-d), d^k, and d^k (1+d) (k>=1; 1 at k=0).
// Other l fall back to the Chebyshev-weight quadrature. Requires d < 1
// when l <= 1.
double limit_error(int ell, int k, double d);

// Same quantity evaluated by Gauss-Chebyshev (second kind) quadrature of
// the substituted integral; the d^k factor of the squared characteristic
// polynomial is pulled out analytically so the result retains full
// relative precision even when d^k underflows the integral scale.
double limit_error_quadrature(int ell, int k, double d);

// Fixed-rule variant for quadrature studies: evaluates the same integral
// with exactly `nodes` Gauss-Chebyshev nodes (no adaptivity).
double limit_error_quadrature_nodes(int ell, int k, double d, int nodes);

// Moment of the Marchenko-Pastur law, integral of lambda^k. Negative k
// requires d < 1.
double mp_moment(int k, double d);

struct HaltingPrediction {
  int k;                  // ceiling-formula value
  bool near_exceptional;  // eps within fp precision of some e_{l,k,d}
};

// Deterministic limit halting time:
//   l=1: ceil((2 log eps + log(1-d)) / log d),  eps^2 < 1/(1-d)
//   l=2: ceil(2 log eps / log d),               eps < 1
HaltingPrediction predict_halting(int ell, double eps, double d);

// {e_{l,k,d} : 0 <= k <= k_max}; strictly decreasing in k. These are the
// eps values at which limit halting times take two adjacent values.
std::vector<double> exceptional_set(int ell, double d, int k_max);

// Classical CG estimate 2 / (rho^k + rho^-k), rho = (sqrt(kappa)-1)/(sqrt(kappa)+1).
double classical_cg_bound(double kappa, int k);

// Table of limits for one (d, ell): values[k] = e_{l,k,d} for k = 0..k_max.
struct TheoryTable {
  double d;
  int ell;
  std::vector<double> values;
};

TheoryTable make_theory_table(int ell, double d, int k_max);

}  // namespace cgw::theory
