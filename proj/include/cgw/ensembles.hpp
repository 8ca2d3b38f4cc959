#pragma once

#include <cstdint>
#include <string_view>

#include "cgw/matrix.hpp"
#include "cgw/rng.hpp"

namespace cgw::ensembles {

enum class Kind { GaussianWishart, BernoulliWishart, ChiBidiagonal };

std::string_view kind_name(Kind k);

// Parameters of one random linear-system distribution. m = floor(n/d),
// so d in (0, 1] guarantees m >= n and an almost surely positive definite
// sample covariance.
struct EnsembleSpec {
  int n = 0;
  double d = 0.0;
  int beta = 1;
  Kind kind = Kind::GaussianWishart;
  std::uint64_t seed = 0;

  int m() const;      // floor(n / d)
  void validate() const;
  bool operator==(const EnsembleSpec&) const = default;
};

// W = X X^* / (beta m); real symmetric (beta = 1) or complex Hermitian
// (beta = 2). The Bernoulli variant is W = X X^T / m with +-1 entries.
struct DenseWishart {
  Matrix real;    // populated when beta == 1
  CMatrix cplx;   // populated when beta == 2
  int beta = 1;
};

// The bidiagonal factor H of the chi model: diag[j] ~ chi_{beta(m-j)},
// subdiag[j] ~ chi_{beta(n-1-j)}, all independent; scale = beta m.
struct BidiagonalChi {
  Vec diag;
  Vec subdiag;
  double scale = 0.0;

  // Jacobi matrix (1/scale) H H^T
  SymmetricTridiagonal jacobi() const;
};

// Squared first eigenvector components: omega = nu / ||nu||_1 with nu_j
// iid chi^2_beta.
struct SpectralWeights {
  Vec omega;
};

// One chi draw with df degrees of freedom (df > 0).
double sample_chi(double df, rng::Xoshiro256pp& g);

// Gaussian n x m factor with iid standard normal entries.
Matrix sample_ginibre(int n, int m, rng::Xoshiro256pp& g);

DenseWishart sample_dense_wishart(const EnsembleSpec& spec, rng::Xoshiro256pp& g);

// Factor-only sampling: X (and the 1/(beta m) scale) without forming the
// Gram matrix; used by operator-based solvers where only matvecs with W
// are needed. Real kinds only.
struct WishartFactor {
  Matrix x;
  double scale = 0.0;
};
WishartFactor sample_wishart_factor(const EnsembleSpec& spec, rng::Xoshiro256pp& g);

BidiagonalChi sample_bidiagonal_chi(const EnsembleSpec& spec, rng::Xoshiro256pp& g);

SpectralWeights sample_spectral_weights(int n, int beta, rng::Xoshiro256pp& g);

// Haar-uniform unit vector (normalized iid Gaussians).
Vec sample_unit_vector(int n, rng::Xoshiro256pp& g);
CVec sample_unit_vector_complex(int n, rng::Xoshiro256pp& g);

}  // namespace cgw::ensembles
