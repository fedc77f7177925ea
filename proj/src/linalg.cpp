#include "fockbell/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fockbell/errors.hpp"

namespace fockbell {

double ComplexMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (const auto& z : data_) sum += std::norm(z);
  return std::sqrt(sum);
}

namespace {

using Complex = std::complex<double>;

Complex column_dot(const ComplexMatrix& m, std::size_t p, std::size_t q) {
  Complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < m.rows(); ++i) sum += std::conj(m(i, p)) * m(i, q);
  return sum;
}

// SVD of a matrix with rows >= cols by orthogonalizing column pairs with
// complex Jacobi rotations until the column Gram matrix is diagonal.
SvdResult jacobi_svd_tall(const ComplexMatrix& a, int max_sweeps) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  ComplexMatrix b = a;
  ComplexMatrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  const double tol = 1e-13;
  // Columns this far below the matrix scale are numerically null; rotating
  // them against each other cycles on rounding noise and never settles.
  const double fro = a.frobenius_norm();
  const double null_floor = fro * fro * 1e-30;
  bool converged = (n <= 1);
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double app = column_dot(b, p, p).real();
        const double aqq = column_dot(b, q, q).real();
        if (app <= null_floor || aqq <= null_floor) continue;
        const Complex apq = column_dot(b, p, q);
        const double off = std::abs(apq);
        if (off <= tol * std::sqrt(app * aqq) || off == 0.0) continue;
        converged = false;
        const Complex phase = apq / off;
        const double tau = (aqq - app) / (2.0 * off);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        // columns (p, q) <- (c*p - s*conj(phase)*q, s*phase*p + c*q)
        for (std::size_t i = 0; i < m; ++i) {
          const Complex bp = b(i, p), bq = b(i, q);
          b(i, p) = c * bp - s * std::conj(phase) * bq;
          b(i, q) = s * phase * bp + c * bq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const Complex vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * std::conj(phase) * vq;
          v(i, q) = s * phase * vp + c * vq;
        }
      }
    }
  }
  if (!converged) throw NumericError("Jacobi SVD did not converge");

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(column_dot(b, j, j).real());

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  SvdResult result;
  result.singular_values.resize(n);
  result.u = ComplexMatrix(m, n);
  result.v = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    const double s = sigma[src];
    result.singular_values[j] = s;
    if (s > 0.0)
      for (std::size_t i = 0; i < m; ++i) result.u(i, j) = b(i, src) / s;
    for (std::size_t i = 0; i < n; ++i) result.v(i, j) = v(i, src);
  }
  return result;
}

}  // namespace

SvdResult jacobi_svd(const ComplexMatrix& a, int max_sweeps) {
  if (a.rows() == 0 || a.cols() == 0) throw StructuralError("SVD of an empty matrix");
  if (a.rows() >= a.cols()) return jacobi_svd_tall(a, max_sweeps);
  // A = U S V^H  <=>  A^H = V S U^H
  ComplexMatrix ah(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) ah(j, i) = std::conj(a(i, j));
  SvdResult swapped = jacobi_svd_tall(ah, max_sweeps);
  SvdResult result;
  result.singular_values = std::move(swapped.singular_values);
  result.u = std::move(swapped.v);
  result.v = std::move(swapped.u);
  return result;
}

}  // namespace fockbell
