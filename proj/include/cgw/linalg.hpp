#pragma once

#include "cgw/matrix.hpp"

namespace cgw::linalg {

// Cholesky factorization A = L L^T (L L^* for the Hermitian overload).
// Throws if the matrix is not positive definite.
Matrix cholesky(const Matrix& a);
CMatrix cholesky(const CMatrix& a);

Vec cholesky_solve(const Matrix& l, const Vec& b);
CVec cholesky_solve(const CMatrix& l, const CVec& b);

// Direct solve of a positive definite tridiagonal system via LDL^T.
Vec tridiagonal_solve(const SymmetricTridiagonal& t, const Vec& b);

// Householder reduction of a symmetric (Hermitian) matrix to symmetric
// tridiagonal form. The transform fixes e_1, so first eigenvector
// components survive the reduction. When q is non-null it receives the
// accumulated transform: a = q t q^T (q t q^* in the complex case, with
// the phase scaling that makes the tridiagonal real folded in).
SymmetricTridiagonal householder_tridiagonalize(const Matrix& a, Matrix* q = nullptr);
SymmetricTridiagonal householder_tridiagonalize(const CMatrix& a, CMatrix* q = nullptr);

}  // namespace cgw::linalg
