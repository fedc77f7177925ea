#pragma once

#include <array>
#include <map>
#include <string>

#include "fockbell/fock_core.hpp"
#include "fockbell/schmidt.hpp"

namespace fockbell {

using Mat2 = std::array<std::array<Complex, 2>, 2>;

// Top two Schmidt terms. They span the 2x2 block the Bell functional acts
// on, with qubit encoding f1 ~ |0>_A, f2 ~ |1>_A and, with flipped basis on
// the second party, g1 ~ |1>_B, g2 ~ |0>_B. Coefficients are kept raw (not
// renormalized), so the pair also records how much of the source state the
// block carries.
struct EffectiveQubitPair {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  FieldState f1, f2;  // party A, orthonormal
  FieldState g1, g2;  // party B, orthonormal

  // (lambda1 f1 (x) g1 + lambda2 f2 (x) g2) / sqrt(lambda1^2 + lambda2^2)
  FieldState normalized_pair_state() const;
};

// Throws SeparableStateError when the decomposition has rank < 2.
EffectiveQubitPair effective_pair_from_schmidt(const SchmidtDecomposition& d);

// Measurement directions (sin t, 0, cos t) for both parties, radians in (-pi, pi].
struct SettingAngles {
  double alpha = 0.0;
  double alpha_prime = 0.0;
  double beta = 0.0;
  double beta_prime = 0.0;
};

double normalize_angle(double radians);

// Closed-form settings for a two-term Schmidt state: alpha = 0,
// alpha' = -sign(l1 l2) pi/2, cos beta = -cos beta' = (1 + 4|l1 l2|)^{-1/2}
// with the product taken on the normalized pair. Only the cosines are pinned
// by the formula; the sines are chosen positive, which maximizes the selected
// branch. This base is known to sit slightly below the true two-qubit
// optimum; optimize_settings provides the independent search.
SettingAngles gisin_settings(double lambda1, double lambda2);

struct SettingsSearchConfig {
  double grid_step_deg = 2.0;
  int refine_rounds = 48;
};

struct SettingsSearchResult {
  SettingAngles angles;
  double chsh_max = 0.0;
};

// Maximizes the selected-branch CHSH expression of the normalized pair state
// over the four angles: coarse grid over (alpha, alpha'), exact closed-form
// maximization over (beta, beta'), then local refinement. Deterministic;
// never returns less than the gisin_settings value.
SettingsSearchResult optimize_settings(const EffectiveQubitPair& pair,
                                       const SettingsSearchConfig& config = {});

enum class ChBranch { One = 1, Two = 2 };

struct ChReport {
  std::map<std::string, double> probabilities;  // joints p00(...) and marginals p0(...)
  double ch_branch1 = 0.0;
  double ch_branch2 = 0.0;
  double chsh_branch1 = 0.0;
  double chsh_branch2 = 0.0;
  ChBranch selected_branch = ChBranch::One;
  double selected_ch = 0.0;
  bool violation = false;
  std::array<std::array<Complex, 2>, 2> effective_amplitudes{};  // c[k][n] = <f_k g_n|psi>
};

// Evaluates joints on the effective 2x2 block and marginals through one-sided
// operators (partial overlaps), so components of s outside the block still
// count toward the marginals. The CHSH branch values use the dichotomic
// correlation consistent with the probability operators (outcome 0 on B is
// the -1 eigenvalue); branch 1 iff E(alpha,beta) >= E(alpha,beta'), ties to
// branch 1.
ChReport ch_probabilities(const FieldState& s, const EffectiveQubitPair& pair,
                          const SettingAngles& settings);

// Correlation function <(alpha . Sigma(a)) (beta . Sigma(b))> on s.
double correlation(const FieldState& s, const EffectiveQubitPair& pair, double alpha,
                   double beta);

// The CH Bell operator for a fixed pair, settings and branch. Expectations
// are plain quadratic forms, so unnormalized inputs give unnormalized values.
class ChOperator {
 public:
  ChOperator(EffectiveQubitPair pair, SettingAngles settings, ChBranch branch);

  double expectation(const FieldState& s) const;
  double nonlocal_expectation(const FieldState& s) const;
  double local_a_expectation(const FieldState& s) const;
  double local_b_expectation(const FieldState& s) const;
  FieldState apply(const FieldState& s) const;

  const EffectiveQubitPair& pair() const { return pair_; }
  const SettingAngles& settings() const { return settings_; }
  ChBranch branch() const { return branch_; }

 private:
  EffectiveQubitPair pair_;
  SettingAngles settings_;
  ChBranch branch_;
  Mat2 local_a_;                            // 1/2 (I + A(alpha'))
  Mat2 local_b_;                            // 1/2 (I - B(beta or beta'))
  std::array<std::array<Complex, 4>, 4> nonlocal_;  // composite (k,n) indices
};

// Split of a CH expectation into its bipartite part, the two local parts and
// the local weight falling outside a reference sector. The full expectation
// is nl - loc_a - loc_b; the leakage terms are the parts of loc_a / loc_b
// carried by components whose particle numbers mismatch the sector.
struct BellOperatorDecomposition {
  double nl_expectation = 0.0;
  double loc_a_expectation = 0.0;
  double loc_b_expectation = 0.0;
  double leakage_a = 0.0;
  double leakage_b = 0.0;
};

BellOperatorDecomposition decompose_ch_expectation(const ChOperator& op, const FieldState& s,
                                                   int sector_n, int sector_m);

struct ScalingLawValues {
  double full_state_ch = 0.0;
  double rescaled_pair_ch = 0.0;  // (l1^2 + l2^2) <CH> on the normalized pair state
};

// For a CH functional built from the state's own top two Schmidt terms the
// full-state value equals the rescaled pair value; both sides are returned.
ScalingLawValues verify_scaling_law(const FieldState& s, const SchmidtDecomposition& d,
                                    const SettingAngles& settings);

// Maximum of the CH / CHSH functional over the 16 deterministic local
// strategies; the classical bounds of the implemented expressions.
double lhv_max_ch(ChBranch branch);
double lhv_max_chsh(ChBranch branch);

// Effective 2x2 representations (x/y/z); the B side carries the basis flip.
Mat2 field_sigma_a(char axis);
Mat2 field_sigma_b(char axis);
Mat2 setting_operator_a(double alpha);
Mat2 setting_operator_b(double beta);

// How measurement settings are chosen by the higher-level drivers.
struct SettingsChoice {
  enum class Source { ClosedForm, Numeric, Explicit };
  Source source = Source::Numeric;
  SettingAngles explicit_angles{};
};

SettingAngles resolve_settings(const SettingsChoice& choice, const EffectiveQubitPair& pair);

}  // namespace fockbell
