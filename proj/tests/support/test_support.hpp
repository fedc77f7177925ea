#pragma once

// Shared helpers for the test suites: occupation enumeration, seeded random
// state generation, and an independent Hermitian eigensolver used as the
// spectral oracle against the Schmidt decomposition.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "fockbell/fock_core.hpp"

namespace fockbell::testing {

inline std::vector<Occupation> enumerate_occupations(const std::vector<ModeId>& modes,
                                                     int max_total) {
  std::vector<Occupation> result;
  std::vector<std::pair<ModeId, int>> current;
  auto recurse = [&](auto&& self, std::size_t position, int remaining) -> void {
    if (position == modes.size()) {
      result.emplace_back(current);
      return;
    }
    for (int count = 0; count <= remaining; ++count) {
      if (count > 0) current.emplace_back(modes[position], count);
      self(self, position + 1, remaining - count);
      if (count > 0) current.pop_back();
    }
  };
  recurse(recurse, 0, max_total);
  return result;
}

inline ModePartition small_partition(int a_modes, int b_modes) {
  std::vector<ModeId> a, b;
  for (int i = 1; i <= a_modes; ++i) a.push_back(mode_a(i));
  for (int i = 1; i <= b_modes; ++i) b.push_back(mode_b(i));
  return ModePartition(std::move(a), std::move(b));
}

// Dense random state with Gaussian amplitudes, normalized.
inline FieldState random_state(std::mt19937_64& rng, int a_modes, int b_modes, int max_quanta,
                               double keep_probability = 1.0) {
  const ModePartition partition = small_partition(a_modes, b_modes);
  FieldState s(partition, FieldStatistics::Boson, TruncationPolicy{max_quanta, 1e-14});
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const auto a_occs = enumerate_occupations(partition.a_modes(), max_quanta);
  const auto b_occs = enumerate_occupations(partition.b_modes(), max_quanta);
  for (const auto& a_occ : a_occs)
    for (const auto& b_occ : b_occs) {
      const double re = gauss(rng), im = gauss(rng);
      if (uniform(rng) > keep_probability) continue;
      s.add_amplitude(BasisKey{a_occ, b_occ}, Complex{re, im});
    }
  if (s.is_zero()) s.add_amplitude(BasisKey{}, Complex{1.0, 0.0});
  return s.normalized();
}

// One-party occupation basis vector on the given partition.
inline FieldState basis_vector(const FieldState& reference, Party side, const Occupation& occ) {
  FieldState v(reference.partition(), reference.statistics(), reference.truncation());
  BasisKey key;
  (side == Party::A ? key.a_occ : key.b_occ) = occ;
  v.add_amplitude(key, Complex{1.0, 0.0});
  return v;
}

// Eigenvalues of a Hermitian matrix by cyclic two-sided Jacobi rotations,
// descending. Independent of the SVD kernel in the library.
inline std::vector<double> hermitian_eigenvalues(std::vector<std::vector<Complex>> h) {
  const std::size_t n = h.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(h[p][q]);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double magnitude = std::abs(h[p][q]);
        if (magnitude < 1e-300) continue;
        const Complex phase = h[p][q] / magnitude;
        const double tau = (h[q][q].real() - h[p][p].real()) / (2.0 * magnitude);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        // columns, then rows, with J = [[c, s phase], [-s conj(phase), c]]
        for (std::size_t i = 0; i < n; ++i) {
          const Complex hip = h[i][p], hiq = h[i][q];
          h[i][p] = c * hip - s * std::conj(phase) * hiq;
          h[i][q] = s * phase * hip + c * hiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const Complex hpj = h[p][j], hqj = h[q][j];
          h[p][j] = c * hpj - s * phase * hqj;
          h[q][j] = s * std::conj(phase) * hpj + c * hqj;
        }
      }
    }
  }
  std::vector<double> eigenvalues(n);
  for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = h[i][i].real();
  std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<double>());
  return eigenvalues;
}

// Reduced A-side Gram matrix of a state, built from partial overlaps against
// one-party basis vectors. Its eigenvalues are the squared Schmidt
// coefficients.
inline std::vector<std::vector<Complex>> reduced_gram_matrix(const FieldState& s) {
  std::vector<Occupation> support;
  for (const auto& [key, amp] : s.amplitudes()) support.push_back(key.a_occ);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());

  std::vector<FieldState> overlaps;
  for (const auto& occ : support)
    overlaps.push_back(partial_overlap(s, basis_vector(s, Party::A, occ), Party::A));

  std::vector<std::vector<Complex>> gram(support.size(),
                                         std::vector<Complex>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j)
    for (std::size_t k = 0; k < support.size(); ++k)
      gram[j][k] = inner_product(overlaps[j], overlaps[k]);
  return gram;
}

}  // namespace fockbell::testing
