#include "cgw/ensembles.hpp"

#include <cmath>
#include <stdexcept>

#include "cgw/distributions.hpp"
#include "cgw/simd/kernels.hpp"

namespace cgw::ensembles {

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::GaussianWishart: return "gaussian";
    case Kind::BernoulliWishart: return "bernoulli";
    case Kind::ChiBidiagonal: return "chi-bidiagonal";
  }
  return "?";
}

int EnsembleSpec::m() const { return static_cast<int>(std::floor(n / d)); }

void EnsembleSpec::validate() const {
  if (n < 1) throw std::invalid_argument("ensemble: n must be >= 1");
  if (!(d > 0.0) || d > 1.0) throw std::invalid_argument("ensemble: d must lie in (0, 1]");
  if (beta != 1 && beta != 2) throw std::invalid_argument("ensemble: beta must be 1 or 2");
  if (kind == Kind::BernoulliWishart && beta != 1)
    throw std::invalid_argument("ensemble: the Bernoulli ensemble is defined for beta = 1");
  if (m() < n) throw std::invalid_argument("ensemble: floor(n/d) must be >= n");
}

SymmetricTridiagonal BidiagonalChi::jacobi() const {
  const std::size_t n = diag.size();
  SymmetricTridiagonal t;
  t.diag.resize(n);
  t.offdiag.resize(n > 0 ? n - 1 : 0);
  for (std::size_t j = 0; j < n; ++j) {
    double v = diag[j] * diag[j];
    if (j > 0) v += subdiag[j - 1] * subdiag[j - 1];
    t.diag[j] = v / scale;
    if (j + 1 < n) t.offdiag[j] = diag[j] * subdiag[j] / scale;
  }
  return t;
}

double sample_chi(double df, rng::Xoshiro256pp& g) { return dist::chi(g, df); }

Matrix sample_ginibre(int n, int m, rng::Xoshiro256pp& g) {
  Matrix x(n, m);
  double* p = x.data();
  const std::size_t total = static_cast<std::size_t>(n) * m;
  for (std::size_t i = 0; i < total; ++i) p[i] = dist::normal(g);
  return x;
}

namespace {

Matrix sample_sign_matrix(int n, int m, rng::Xoshiro256pp& g) {
  Matrix x(n, m);
  double* p = x.data();
  const std::size_t total = static_cast<std::size_t>(n) * m;
  std::size_t i = 0;
  while (i < total) {
    std::uint64_t bits = g();
    for (int b = 0; b < 64 && i < total; ++b, ++i) {
      p[i] = (bits & 1) ? 1.0 : -1.0;
      bits >>= 1;
    }
  }
  return x;
}

}  // namespace

WishartFactor sample_wishart_factor(const EnsembleSpec& spec, rng::Xoshiro256pp& g) {
  spec.validate();
  const int m = spec.m();
  WishartFactor f;
  switch (spec.kind) {
    case Kind::GaussianWishart:
      if (spec.beta != 1)
        throw std::invalid_argument("wishart factor: real factor form requires beta = 1");
      f.x = sample_ginibre(spec.n, m, g);
      f.scale = 1.0 / m;
      break;
    case Kind::BernoulliWishart:
      f.x = sample_sign_matrix(spec.n, m, g);
      f.scale = 1.0 / m;
      break;
    case Kind::ChiBidiagonal:
      throw std::invalid_argument("wishart factor: chi-bidiagonal has no dense factor");
  }
  return f;
}

DenseWishart sample_dense_wishart(const EnsembleSpec& spec, rng::Xoshiro256pp& g) {
  spec.validate();
  if (spec.kind == Kind::ChiBidiagonal)
    throw std::invalid_argument("sample_dense_wishart: kind must be a dense ensemble");
  const int n = spec.n;
  const int m = spec.m();
  DenseWishart w;
  w.beta = spec.beta;
  if (spec.beta == 1) {
    const WishartFactor f = sample_wishart_factor(spec, g);
    w.real = Matrix(n, n);
    simd::syrk(f.x.data(), n, m, f.scale, w.real.data(), n);
  } else {
    // X = X1 + i X2, W = X X^* / (2m); interleaved draws keep the sample a
    // pure function of the stream position
    CMatrix x(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) {
        const double re = dist::normal(g);
        const double im = dist::normal(g);
        x(i, j) = {re, im};
      }
    const double scale = 1.0 / (2.0 * m);
    w.cplx = CMatrix(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) {
        std::complex<double> s{};
        const std::complex<double>* ri = x.row(i);
        const std::complex<double>* rj = x.row(j);
        for (int t = 0; t < m; ++t) s += ri[t] * std::conj(rj[t]);
        s *= scale;
        if (i == j) s = {s.real(), 0.0};
        w.cplx(i, j) = s;
        w.cplx(j, i) = std::conj(s);
      }
    }
  }
  return w;
}

BidiagonalChi sample_bidiagonal_chi(const EnsembleSpec& spec, rng::Xoshiro256pp& g) {
  spec.validate();
  if (spec.kind != Kind::ChiBidiagonal)
    throw std::invalid_argument("sample_bidiagonal_chi: kind must be ChiBidiagonal");
  const int n = spec.n;
  const int m = spec.m();
  BidiagonalChi h;
  h.scale = static_cast<double>(spec.beta) * m;
  h.diag.resize(n);
  h.subdiag.resize(n > 0 ? n - 1 : 0);
  for (int j = 0; j < n; ++j) {
    h.diag[j] = dist::chi(g, static_cast<double>(spec.beta) * (m - j));
    if (j + 1 < n) h.subdiag[j] = dist::chi(g, static_cast<double>(spec.beta) * (n - 1 - j));
  }
  return h;
}

SpectralWeights sample_spectral_weights(int n, int beta, rng::Xoshiro256pp& g) {
  if (n < 1) throw std::invalid_argument("spectral weights: n must be >= 1");
  if (beta != 1 && beta != 2) throw std::invalid_argument("spectral weights: beta must be 1 or 2");
  SpectralWeights w;
  w.omega.resize(n);
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    w.omega[j] = dist::chi_squared(g, beta);
    total += w.omega[j];
  }
  for (double& v : w.omega) v /= total;
  return w;
}

Vec sample_unit_vector(int n, rng::Xoshiro256pp& g) {
  Vec b(n);
  double norm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    b[i] = dist::normal(g);
    norm2 += b[i] * b[i];
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& v : b) v *= inv;
  return b;
}

CVec sample_unit_vector_complex(int n, rng::Xoshiro256pp& g) {
  CVec b(n);
  double norm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double re = dist::normal(g);
    const double im = dist::normal(g);
    b[i] = {re, im};
    norm2 += re * re + im * im;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& v : b) v *= inv;
  return b;
}

}  // namespace cgw::ensembles
