#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fockbell/schmidt.hpp"
#include "fockbell/states.hpp"
#include "support/test_support.hpp"

using namespace fockbell;
using fockbell::testing::hermitian_eigenvalues;
using fockbell::testing::random_state;
using fockbell::testing::reduced_gram_matrix;
using fockbell::testing::small_partition;

namespace {

double orthonormality_deviation(const std::vector<FieldState>& vectors) {
  double worst = 0.0;
  for (std::size_t s = 0; s < vectors.size(); ++s)
    for (std::size_t t = 0; t < vectors.size(); ++t) {
      const Complex expected = (s == t) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
      worst = std::max(worst, std::abs(inner_product(vectors[s], vectors[t]) - expected));
    }
  return worst;
}

FieldState bell_pair() {
  FieldState s(small_partition(2, 2), FieldStatistics::Boson, TruncationPolicy{4, 1e-14});
  const double r = 1.0 / std::sqrt(2.0);
  s.add_amplitude(BasisKey{Occupation{{{mode_a(1), 1}}}, Occupation{{{mode_b(2), 1}}}}, r);
  s.add_amplitude(BasisKey{Occupation{{{mode_a(2), 1}}}, Occupation{{{mode_b(1), 1}}}}, -r);
  return s;
}

}  // namespace

TEST_CASE("coefficient matrix layout") {
  SUBCASE("single key gives a 1x1 matrix") {
    FieldState s(small_partition(1, 1), FieldStatistics::Boson, TruncationPolicy{4, 1e-14});
    s.add_amplitude(BasisKey{Occupation{{{mode_a(1), 1}}}, Occupation{{{mode_b(1), 1}}}}, 1.0);
    const CoefficientMatrix cm = build_coefficient_matrix(s);
    CHECK(cm.entries.rows() == 1);
    CHECK(cm.entries.cols() == 1);
    CHECK(cm.entries(0, 0) == Complex{1.0, 0.0});
  }

  SUBCASE("single-photon superposition is anti-diagonal") {
    const FieldState s = beamsplit_single_photon(4);
    const CoefficientMatrix cm = build_coefficient_matrix(s);
    REQUIRE(cm.entries.rows() == 2);
    REQUIRE(cm.entries.cols() == 2);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(cm.entries(0, 1) - Complex{r, 0.0}) < 1e-15);
    CHECK(std::abs(cm.entries(1, 0) - Complex{r, 0.0}) < 1e-15);
    CHECK(std::abs(cm.entries(0, 0)) == 0.0);
    CHECK(std::abs(cm.entries(1, 1)) == 0.0);
  }

  SUBCASE("tmsv is diagonal in graded order") {
    const FieldState s = tmsv(0.6, 2);
    const CoefficientMatrix cm = build_coefficient_matrix(s);
    REQUIRE(cm.entries.rows() == 3);
    REQUIRE(cm.entries.cols() == 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        if (i != j) CHECK(std::abs(cm.entries(i, j)) == 0.0);
    CHECK(cm.entries(0, 0).real() > cm.entries(1, 1).real());
    CHECK(cm.entries(1, 1).real() > cm.entries(2, 2).real());
  }

  SUBCASE("round trip through the matrix is lossless") {
    std::mt19937_64 rng(5);
    const FieldState s = random_state(rng, 2, 2, 2);
    const CoefficientMatrix cm = build_coefficient_matrix(s);
    double recovered = 0.0;
    for (std::size_t i = 0; i < cm.entries.rows(); ++i)
      for (std::size_t j = 0; j < cm.entries.cols(); ++j)
        recovered += std::norm(cm.entries(i, j));
    CHECK(recovered == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("schmidt decomposition basics") {
  SUBCASE("product state has rank 1") {
    FieldState s(small_partition(1, 1), FieldStatistics::Boson, TruncationPolicy{4, 1e-14});
    s.add_amplitude(BasisKey{Occupation{{{mode_a(1), 1}}}, Occupation{{{mode_b(1), 1}}}}, 1.0);
    const SchmidtDecomposition d = schmidt_decompose(s);
    REQUIRE(d.rank() == 1);
    CHECK(d.coefficients[0] == doctest::Approx(1.0));
    CHECK(schmidt_rank(s) == 1);
  }

  SUBCASE("double-rail singlet") {
    const SchmidtDecomposition d = schmidt_decompose(bell_pair());
    REQUIRE(d.rank() == 2);
    CHECK(d.coefficients[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(d.coefficients[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(d.reconstruction_error < 1e-12);
    CHECK(orthonormality_deviation(d.a_vectors) < 1e-12);
    CHECK(orthonormality_deviation(d.b_vectors) < 1e-12);
  }

  SUBCASE("low-gain bsv has the degenerate singlet pair") {
    const double gamma = 0.4;
    const FieldState s = bsv(gamma, 1);
    const SchmidtDecomposition d = schmidt_decompose(s);
    REQUIRE(d.rank() == 3);
    const double n2 = 1.0 / std::pow(std::cosh(gamma), 4) * (1.0 + 2.0 * std::pow(std::tanh(gamma), 2));
    const double singlet = std::tanh(gamma) / std::pow(std::cosh(gamma), 2) / std::sqrt(n2);
    CHECK(d.coefficients[1] == doctest::Approx(singlet).epsilon(1e-12));
    CHECK(d.coefficients[2] == doctest::Approx(singlet).epsilon(1e-12));
  }

  SUBCASE("tmsv rank counts the retained spectrum") {
    CHECK(schmidt_rank(tmsv(0.9, 5)) == 6);
  }

  SUBCASE("zero state is rejected") {
    FieldState zero(small_partition(1, 1), FieldStatistics::Boson, TruncationPolicy{4, 1e-14});
    CHECK_THROWS_AS((void)schmidt_decompose(zero), ValidationError);
  }
}

TEST_CASE("reconstruction") {
  SUBCASE("round trip of random states") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 10; ++trial) {
      const FieldState s = random_state(rng, 2, 3, 2);
      const SchmidtDecomposition d = schmidt_decompose(s);
      CHECK(d.reconstruction_error < 1e-10);
      CHECK(orthonormality_deviation(d.a_vectors) < 1e-10);
      CHECK(orthonormality_deviation(d.b_vectors) < 1e-10);
      double total = 0.0;
      for (double c : d.coefficients) total += c * c;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
  }

  SUBCASE("dropped coefficients show up as the norm deficit") {
    const double lambdas[] = {0.8, 0.55, 0.05};
    const FieldState s = tmsv_from_lambdas(lambdas, 4);
    const SchmidtDecomposition full = schmidt_decompose(s);
    REQUIRE(full.rank() == 3);
    const double smallest = full.coefficients[2];
    const SchmidtDecomposition truncated = schmidt_decompose(s, 0.1);  // relative cut
    REQUIRE(truncated.rank() == 2);
    CHECK(truncated.discarded_weight == doctest::Approx(smallest * smallest).epsilon(1e-12));
    const FieldState rebuilt = reconstruct(truncated);
    CHECK(rebuilt.norm_squared() == doctest::Approx(1.0 - smallest * smallest).epsilon(1e-12));
    CHECK(truncated.reconstruction_error == doctest::Approx(smallest).epsilon(1e-10));
  }
}

TEST_CASE("squared coefficients match the reduced Gram spectrum") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const FieldState s = random_state(rng, 1 + trial % 3, 1 + (trial / 3) % 3, 3, 0.8);
    const SchmidtDecomposition d = schmidt_decompose(s);
    const std::vector<double> spectrum = hermitian_eigenvalues(reduced_gram_matrix(s));
    REQUIRE(spectrum.size() >= d.rank());
    for (std::size_t t = 0; t < d.rank(); ++t)
      CHECK(std::abs(d.coefficients[t] * d.coefficients[t] - spectrum[t]) < 1e-10);
  }
}

TEST_CASE("spectrum is invariant under per-party relabeling") {
  std::mt19937_64 rng(8);
  const FieldState s = random_state(rng, 2, 2, 2);
  // swap the two A modes and the two B modes
  FieldState relabeled(s.partition(), s.statistics(), s.truncation());
  auto swap_occ = [](const Occupation& occ, const ModeId& x, const ModeId& y) {
    std::vector<std::pair<ModeId, int>> entries;
    for (const auto& [mode, count] : occ.entries()) {
      ModeId swapped = mode == x ? y : (mode == y ? x : mode);
      entries.emplace_back(swapped, count);
    }
    return Occupation(entries);
  };
  for (const auto& [key, amp] : s.amplitudes())
    relabeled.add_amplitude(BasisKey{swap_occ(key.a_occ, mode_a(1), mode_a(2)),
                                     swap_occ(key.b_occ, mode_b(1), mode_b(2))},
                            amp);
  const SchmidtDecomposition d1 = schmidt_decompose(s);
  const SchmidtDecomposition d2 = schmidt_decompose(relabeled);
  REQUIRE(d1.rank() == d2.rank());
  for (std::size_t t = 0; t < d1.rank(); ++t)
    CHECK(d1.coefficients[t] == doctest::Approx(d2.coefficients[t]).epsilon(1e-12));
}

TEST_CASE("partial overlap against a Schmidt vector extracts its partner") {
  const FieldState t = tmsv(0.8, 8);
  const SchmidtDecomposition d = schmidt_decompose(t);
  REQUIRE(d.rank() >= 2);
  for (std::size_t k = 0; k < 2; ++k) {
    const FieldState w = partial_overlap(t, d.a_vectors[k], Party::A);
    double diff = 0.0;
    for (const auto& [key, amp] : d.b_vectors[k].amplitudes())
      diff = std::max(diff, std::abs(w.amplitude(key) - d.coefficients[k] * amp));
    CHECK(diff < 1e-12);
    CHECK(w.norm() == doctest::Approx(d.coefficients[k]).epsilon(1e-12));
  }
}

TEST_CASE("phase convention pins the decomposition") {
  FieldState s(small_partition(1, 1), FieldStatistics::Boson, TruncationPolicy{4, 1e-14});
  s.add_amplitude(BasisKey{Occupation{{{mode_a(1), 1}}}, Occupation{{{mode_b(1), 1}}}},
                  Complex{0.0, 0.8});
  s.add_amplitude(BasisKey{Occupation{}, Occupation{}}, Complex{-0.6, 0.0});
  const SchmidtDecomposition d = schmidt_decompose(s);
  for (const FieldState& a : d.a_vectors) {
    Complex pivot{0.0, 0.0};
    double best = -1.0;
    for (const auto& [key, amp] : a.amplitudes())
      if (std::abs(amp) > best) {
        best = std::abs(amp);
        pivot = amp;
      }
    CHECK(pivot.imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(pivot.real() > 0.0);
  }
  CHECK(d.reconstruction_error < 1e-12);
}
