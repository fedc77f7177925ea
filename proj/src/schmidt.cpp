#include "fockbell/schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fockbell/errors.hpp"

namespace fockbell {

namespace {

bool graded_lex_less(const Occupation& x, const Occupation& y, const std::vector<ModeId>& modes) {
  const int tx = x.total(), ty = y.total();
  if (tx != ty) return tx < ty;
  for (const auto& m : modes) {
    const int cx = x.count(m), cy = y.count(m);
    if (cx != cy) return cx < cy;
  }
  return false;
}

std::vector<Occupation> sorted_support(const FieldState& s, Party side) {
  std::vector<Occupation> occs;
  for (const auto& [key, amp] : s.amplitudes())
    occs.push_back(side == Party::A ? key.a_occ : key.b_occ);
  std::sort(occs.begin(), occs.end());
  occs.erase(std::unique(occs.begin(), occs.end()), occs.end());
  const auto& modes = s.partition().modes(side);
  std::sort(occs.begin(), occs.end(),
            [&](const Occupation& x, const Occupation& y) { return graded_lex_less(x, y, modes); });
  return occs;
}

FieldState one_party_vector(const FieldState& reference, Party side,
                            const std::vector<Occupation>& occs,
                            const ComplexMatrix& basis_columns, std::size_t column,
                            bool conjugate) {
  FieldState v(reference.partition(), reference.statistics(), reference.truncation());
  for (std::size_t j = 0; j < occs.size(); ++j) {
    Complex amp = basis_columns(j, column);
    if (conjugate) amp = std::conj(amp);
    BasisKey key;
    (side == Party::A ? key.a_occ : key.b_occ) = occs[j];
    v.add_amplitude(key, amp);
  }
  v.apply_floor();
  return v;
}

double residual_norm(const FieldState& s, const FieldState& approx) {
  std::map<BasisKey, Complex> diff = s.amplitudes();
  for (const auto& [key, amp] : approx.amplitudes()) diff[key] -= amp;
  double n2 = 0.0;
  for (const auto& [key, amp] : diff) n2 += std::norm(amp);
  return std::sqrt(n2);
}

}  // namespace

CoefficientMatrix build_coefficient_matrix(const FieldState& s) {
  CoefficientMatrix cm;
  cm.row_occupations = sorted_support(s, Party::A);
  cm.col_occupations = sorted_support(s, Party::B);
  cm.entries = ComplexMatrix(cm.row_occupations.size(), cm.col_occupations.size());
  std::map<Occupation, std::size_t> row_index, col_index;
  for (std::size_t j = 0; j < cm.row_occupations.size(); ++j) row_index[cm.row_occupations[j]] = j;
  for (std::size_t j = 0; j < cm.col_occupations.size(); ++j) col_index[cm.col_occupations[j]] = j;
  for (const auto& [key, amp] : s.amplitudes())
    cm.entries(row_index.at(key.a_occ), col_index.at(key.b_occ)) = amp;
  return cm;
}

SchmidtDecomposition schmidt_decompose(const FieldState& s, double rank_tol) {
  const double n2 = s.norm_squared();
  if (n2 == 0.0) throw ValidationError("cannot decompose a zero state");
  if (std::abs(n2 - 1.0) > 1e-6)
    throw ValidationError("state must be normalized before decomposition");

  const CoefficientMatrix cm = build_coefficient_matrix(s);
  const SvdResult svd = jacobi_svd(cm.entries);

  SchmidtDecomposition d;
  d.rank_tolerance = rank_tol;
  const double cutoff = svd.singular_values.empty() ? 0.0 : rank_tol * svd.singular_values[0];
  for (std::size_t t = 0; t < svd.singular_values.size(); ++t) {
    const double sigma = svd.singular_values[t];
    if (sigma <= cutoff || sigma == 0.0) {
      d.discarded_weight += sigma * sigma;
      continue;
    }
    d.coefficients.push_back(sigma);
    FieldState a = one_party_vector(s, Party::A, cm.row_occupations, svd.u, t, false);
    FieldState b = one_party_vector(s, Party::B, cm.col_occupations, svd.v, t, true);

    // Phase convention: the largest-modulus amplitude of the A-side vector is
    // made real positive, the compensating phase goes into the B-side vector.
    Complex pivot{0.0, 0.0};
    double best = -1.0;
    for (const auto& [key, amp] : a.amplitudes()) {
      const double mag = std::abs(amp);
      if (mag > best) {
        best = mag;
        pivot = amp;
      }
    }
    if (best > 0.0) {
      const Complex phase = pivot / std::abs(pivot);
      FieldState a_fixed(a.partition(), a.statistics(), a.truncation());
      for (const auto& [key, amp] : a.amplitudes())
        a_fixed.add_amplitude(key, amp / phase);
      FieldState b_fixed(b.partition(), b.statistics(), b.truncation());
      for (const auto& [key, amp] : b.amplitudes())
        b_fixed.add_amplitude(key, amp * phase);
      a = std::move(a_fixed);
      b = std::move(b_fixed);
    }
    d.a_vectors.push_back(std::move(a));
    d.b_vectors.push_back(std::move(b));
  }
  d.reconstruction_error = residual_norm(s, reconstruct(d));
  return d;
}

int schmidt_rank(const FieldState& s, double rank_tol) {
  return static_cast<int>(schmidt_decompose(s, rank_tol).rank());
}

FieldState reconstruct(const SchmidtDecomposition& d) {
  if (d.coefficients.empty()) throw StructuralError("cannot reconstruct an empty decomposition");
  FieldState acc(d.a_vectors[0].partition(), d.a_vectors[0].statistics(),
                 d.a_vectors[0].truncation());
  for (std::size_t t = 0; t < d.coefficients.size(); ++t) {
    const FieldState product = tensor_restricted(d.a_vectors[t], d.b_vectors[t]);
    for (const auto& [key, amp] : product.amplitudes())
      acc.add_amplitude(key, d.coefficients[t] * amp);
  }
  return acc;
}

}  // namespace fockbell
