#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace cgw {

using Vec = std::vector<double>;
using CVec = std::vector<std::complex<double>>;

// Row-major dense matrix.
template <typename T>
class MatrixT {
 public:
  MatrixT() = default;
  MatrixT(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T{}) {}

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  T* row(std::size_t i) { return data_.data() + i * cols_; }
  const T* row(std::size_t i) const { return data_.data() + i * cols_; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  bool operator==(const MatrixT&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Matrix = MatrixT<double>;
using CMatrix = MatrixT<std::complex<double>>;

// Symmetric tridiagonal (Jacobi when offdiag > 0): diag has length n,
// offdiag length n-1.
struct SymmetricTridiagonal {
  Vec diag;
  Vec offdiag;

  std::size_t size() const { return diag.size(); }

  // y = T x
  void apply(const double* x, double* y) const {
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
      double v = diag[i] * x[i];
      if (i > 0) v += offdiag[i - 1] * x[i - 1];
      if (i + 1 < n) v += offdiag[i] * x[i + 1];
      y[i] = v;
    }
  }
};

}  // namespace cgw
