#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cgw/matrix.hpp"

namespace cgw::spectral {

// Atomic probability measure: strictly increasing atoms, nonnegative
// weights summing to 1. Construction merges atoms closer than
// 1e-12 * spectral diameter.
struct SpectralMeasure {
  Vec points;
  Vec weights;

  static SpectralMeasure from_atoms(Vec atoms, Vec weights);
  static SpectralMeasure uniform(Vec atoms);
};

struct TridiagonalEigen {
  Vec eigenvalues;               // ascending
  Vec first_components_squared;  // sums to 1
};

// Full spectrum of a Jacobi matrix plus the squared first components of
// its orthonormal eigenvectors (implicit-shift QL, rotations carried on
// the first coordinate row only).
TridiagonalEigen eigen_tridiagonal(const SymmetricTridiagonal& t);

struct DenseEigen {
  Vec eigenvalues;  // ascending
  std::optional<Matrix> vectors;
  std::optional<CMatrix> cvectors;
};

// Dense symmetric / Hermitian eigensolver: Householder reduction followed
// by the tridiagonal QL kernel. Input asymmetry beyond 1e-12 (relative to
// the largest entry) is a validation error.
DenseEigen eigen_dense(const Matrix& w, bool with_vectors = false);
DenseEigen eigen_dense(const CMatrix& w, bool with_vectors = false);

// Kolmogorov-Smirnov distance, exact over atom locations.
double ks_distance(const SpectralMeasure& mu, const SpectralMeasure& nu);

// Distance between an analytic (continuous) CDF and an atomic measure;
// both one-sided limits are evaluated at every atom.
double ks_distance(const std::function<double(double)>& cdf, const SpectralMeasure& nu);

}  // namespace cgw::spectral
