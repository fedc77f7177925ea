#pragma once

#include <cstddef>
#include <vector>

#include "fockbell/fock_core.hpp"
#include "fockbell/linalg.hpp"

namespace fockbell {

// Amplitudes of a state arranged over indexed one-party occupation bases:
// entries(j, j') is the amplitude of |row j ; col j'>. Rows and columns are
// ordered graded-lexicographically (total quanta, then counts along the
// partition's mode order), so the matrix is reproducible across runs.
struct CoefficientMatrix {
  std::vector<Occupation> row_occupations;  // A side
  std::vector<Occupation> col_occupations;  // B side
  ComplexMatrix entries;
};

CoefficientMatrix build_coefficient_matrix(const FieldState& s);

// Schmidt decomposition over the bipartition of modes: descending positive
// coefficients with locally orthonormal one-party vectors on each side.
struct SchmidtDecomposition {
  std::vector<double> coefficients;    // above rank tolerance, descending
  std::vector<FieldState> a_vectors;   // restricted to party A
  std::vector<FieldState> b_vectors;   // restricted to party B
  double reconstruction_error = 0.0;   // ||s - sum_t c_t a_t (x) b_t||
  double discarded_weight = 0.0;       // sum of squared discarded singular values
  double rank_tolerance = 0.0;         // relative to the largest coefficient

  std::size_t rank() const { return coefficients.size(); }
};

// Coefficients below tol * (largest coefficient) are dropped from the rank;
// their weight is kept in discarded_weight. Each a-vector's largest-modulus
// amplitude is made real positive, with the compensating phase moved into
// the matching b-vector, so decompositions are reproducible.
SchmidtDecomposition schmidt_decompose(const FieldState& s, double rank_tol = 1e-10);

int schmidt_rank(const FieldState& s, double rank_tol = 1e-10);

// sum_t c_t a_t (x) b_t. For a full-rank decomposition this reproduces the
// input; with dropped coefficients the squared-norm deficit equals
// discarded_weight.
FieldState reconstruct(const SchmidtDecomposition& d);

}  // namespace fockbell
