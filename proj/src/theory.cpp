#include "cgw/theory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cgw::theory {

namespace {

constexpr double kPi = std::numbers::pi;

void check_d(double d) {
  if (!(d > 0.0) || d > 1.0)
    throw std::invalid_argument("d must lie in (0, 1]");
}

void check_d_strict(double d) {
  if (!(d > 0.0) || !(d < 1.0))
    throw std::invalid_argument("d must lie in (0, 1)");
}

// U_k(-x) - sqrt(d) U_{k-1}(-x); the characteristic polynomial of the
// limit Jacobi block with the d^{k/2} scale factored out.
double reduced_char_poly(int k, double sqrt_d, double minus_x) {
  if (k == 0) return 1.0;
  double um1 = 1.0;                 // U_0
  double u = 2.0 * minus_x;         // U_1
  for (int j = 2; j <= k; ++j) {
    const double next = 2.0 * minus_x * u - um1;
    um1 = u;
    u = next;
  }
  return u - sqrt_d * um1;
}

// (2/pi) int_{-1}^{1} lambda(x)^{pow} B_k(x)^2 sqrt(1-x^2) dx with
// lambda = 2 x sqrt(d) + 1 + d, via the N-node second-kind Gauss-Chebyshev
// rule (equivalently the midpoint-type rule in theta).
double chebyshev_rule(int ell_pow, int k, double d, int nodes) {
  const double sd = std::sqrt(d);
  double sum = 0.0;
  for (int i = 1; i <= nodes; ++i) {
    const double theta = kPi * static_cast<double>(i) / (nodes + 1);
    const double x = std::cos(theta);
    const double s = std::sin(theta);
    const double lambda = 2.0 * x * sd + 1.0 + d;
    const double b = reduced_char_poly(k, sd, -x);
    sum += std::pow(lambda, ell_pow) * b * b * s * s;
  }
  return 2.0 * sum / (nodes + 1);
}

// Doubles the node count until two successive values agree to 1e-12.
// The integrand is analytic in theta (the sin^2 weight absorbs the d = 1
// hard edge), so convergence is geometric.
double chebyshev_adaptive(int ell_pow, int k, double d) {
  int nodes = 64 + 2 * k;
  double prev = chebyshev_rule(ell_pow, k, d, nodes);
  for (int iter = 0; iter < 24; ++iter) {
    nodes *= 2;
    const double next = chebyshev_rule(ell_pow, k, d, nodes);
    if (std::abs(next - prev) <= 1e-12 * std::max(1.0, std::abs(next)))
      return next;
    prev = next;
  }
  throw std::runtime_error("limit quadrature did not converge");
}

double squared_limit_integral(int ell, int k, double d) {
  if (ell >= 3) {
    // polynomial integrand of degree 2k + ell - 3: the rule with N nodes
    // is exact through degree 2N - 1
    const int nodes = std::max(2 * (k + 2), k + ell);
    return chebyshev_rule(ell - 3, k, d, nodes);
  }
  return chebyshev_adaptive(ell - 3, k, d);
}

}  // namespace

MpLaw::MpLaw(double dd) : d(dd) {
  check_d(d);
  const double sd = std::sqrt(d);
  d_minus = (1.0 - sd) * (1.0 - sd);
  d_plus = (1.0 + sd) * (1.0 + sd);
}

double MpLaw::density(double x) const {
  if (x <= d_minus || x >= d_plus) return 0.0;
  return std::sqrt((d_plus - x) * (x - d_minus)) / (2.0 * kPi * d * x);
}

double MpLaw::cdf(double x) const {
  if (x <= d_minus) return 0.0;
  if (x >= d_plus) return 1.0;
  const double sd = std::sqrt(d);
  double c = (1.0 + d - x) / (2.0 * sd);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  const double theta = std::acos(c);
  if (d == 1.0) return (theta + std::sin(theta)) / kPi;
  // antiderivative of sin^2(t) / (1 + d - 2 sqrt(d) cos t)
  const double half = 0.5 * theta;
  const double atan_term =
      std::atan2((1.0 + sd) * std::sin(half), (1.0 - sd) * std::cos(half));
  const double val = std::sin(theta) / (2.0 * sd) + (1.0 + d) * theta / (4.0 * d) -
                     (1.0 - d) / (2.0 * d) * atan_term;
  return 2.0 * val / kPi;
}

double chebyshev_u(int k, double x) {
  if (k < 0) return 0.0;
  double um1 = 0.0;
  double u = 1.0;
  for (int j = 1; j <= k; ++j) {
    const double next = 2.0 * x * u - um1;
    um1 = u;
    u = next;
  }
  return u;
}

Matrix LimitJacobi::dense() const {
  Matrix t(k, k);
  const double sd = std::sqrt(d);
  for (int i = 0; i < k; ++i) {
    t(i, i) = (i == 0) ? 1.0 : 1.0 + d;
    if (i + 1 < k) {
      t(i, i + 1) = sd;
      t(i + 1, i) = sd;
    }
  }
  return t;
}

double limit_char_poly(int k, double d, double lambda) {
  check_d(d);
  if (k < 0) throw std::invalid_argument("limit_char_poly: k must be >= 0");
  if (k == 0) return 1.0;
  const double sd = std::sqrt(d);
  const double x = (lambda - 1.0 - d) / (2.0 * sd);
  return std::pow(d, 0.5 * k) * reduced_char_poly(k, sd, -x);
}

double limit_error(int ell, int k, double d) {
  check_d(d);
  if (k < 0) throw std::invalid_argument("limit_error: k must be >= 0");
  if (ell <= 1 && d == 1.0)
    throw std::invalid_argument("limit_error: ell <= 1 requires d < 1");
  switch (ell) {
    case 1:
      return std::sqrt(std::pow(d, k) / (1.0 - d));
    case 2:
      return std::pow(d, 0.5 * k);
    case 3:
      return k == 0 ? 1.0 : std::sqrt(std::pow(d, k) * (1.0 + d));
    default:
      return limit_error_quadrature(ell, k, d);
  }
}

double limit_error_quadrature(int ell, int k, double d) {
  check_d(d);
  if (k < 0) throw std::invalid_argument("limit_error_quadrature: k must be >= 0");
  if (ell <= 1 && d == 1.0)
    throw std::invalid_argument("limit_error_quadrature: ell <= 1 requires d < 1");
  return std::sqrt(std::pow(d, k) * squared_limit_integral(ell, k, d));
}

double limit_error_quadrature_nodes(int ell, int k, double d, int nodes) {
  check_d(d);
  if (k < 0 || nodes < 1)
    throw std::invalid_argument("limit_error_quadrature_nodes: bad k or node count");
  if (ell <= 1 && d == 1.0)
    throw std::invalid_argument("limit_error_quadrature_nodes: ell <= 1 requires d < 1");
  return std::sqrt(std::pow(d, k) * chebyshev_rule(ell - 3, k, d, nodes));
}

double mp_moment(int k, double d) {
  check_d(d);
  if (k < 0 && d == 1.0)
    throw std::invalid_argument("mp_moment: negative moments require d < 1");
  if (k >= 1) return chebyshev_rule(k - 1, 0, d, k + 2);
  return chebyshev_adaptive(k - 1, 0, d);
}

HaltingPrediction predict_halting(int ell, double eps, double d) {
  check_d_strict(d);
  if (!(eps > 0.0)) throw std::invalid_argument("predict_halting: eps must be positive");
  double numer;
  if (ell == 1) {
    if (!(eps * eps < 1.0 / (1.0 - d)))
      throw std::invalid_argument("predict_halting: ell=1 requires eps^2 < 1/(1-d)");
    numer = 2.0 * std::log(eps) + std::log(1.0 - d);
  } else if (ell == 2) {
    if (!(eps < 1.0))
      throw std::invalid_argument("predict_halting: ell=2 requires eps < 1");
    numer = 2.0 * std::log(eps);
  } else {
    throw std::invalid_argument("predict_halting: ell must be 1 or 2");
  }
  const int k = static_cast<int>(std::ceil(numer / std::log(d)));
  bool near = false;
  for (int j = std::max(0, k - 2); j <= k + 2; ++j) {
    const double e = limit_error(ell, j, d);
    if (std::abs(eps - e) <= 1e-12 * e) near = true;
  }
  return {k, near};
}

std::vector<double> exceptional_set(int ell, double d, int k_max) {
  check_d_strict(d);
  if (ell != 1 && ell != 2)
    throw std::invalid_argument("exceptional_set: ell must be 1 or 2");
  if (k_max < 0) throw std::invalid_argument("exceptional_set: k_max must be >= 0");
  std::vector<double> out;
  out.reserve(k_max + 1);
  for (int k = 0; k <= k_max; ++k) out.push_back(limit_error(ell, k, d));
  return out;
}

double classical_cg_bound(double kappa, int k) {
  if (!(kappa >= 1.0)) throw std::invalid_argument("classical_cg_bound: kappa must be >= 1");
  if (k < 0) throw std::invalid_argument("classical_cg_bound: k must be >= 0");
  if (k == 0) return 1.0;
  const double sk = std::sqrt(kappa);
  const double rho = (sk - 1.0) / (sk + 1.0);
  if (rho == 0.0) return 0.0;
  const double rk = std::pow(rho, k);
  return 2.0 * rk / (1.0 + rk * rk);
}

TheoryTable make_theory_table(int ell, double d, int k_max) {
  TheoryTable t{d, ell, {}};
  t.values.reserve(k_max + 1);
  for (int k = 0; k <= k_max; ++k) t.values.push_back(limit_error(ell, k, d));
  return t;
}

}  // namespace cgw::theory
