#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace fockbell {

// Minimal dense complex matrix, row major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::complex<double>& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const std::complex<double>& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  double frobenius_norm() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::complex<double>> data_;
};

struct SvdResult {
  ComplexMatrix u;                     // rows x k, orthonormal columns (for nonzero values)
  std::vector<double> singular_values; // k = min(rows, cols), descending
  ComplexMatrix v;                     // cols x k, orthonormal columns; A = U diag(s) V^H
};

// One-sided Jacobi SVD. Deterministic for a fixed input; throws NumericError
// if the sweep limit is exceeded.
SvdResult jacobi_svd(const ComplexMatrix& a, int max_sweeps = 64);

}  // namespace fockbell
