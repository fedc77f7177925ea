#include "fockbell/bell.hpp"

#include <algorithm>
#include <cmath>

#include "fockbell/errors.hpp"

namespace fockbell {

namespace {

constexpr double kPi = 3.14159265358979323846;

Mat2 make2(Complex m11, Complex m12, Complex m21, Complex m22) {
  return Mat2{{{m11, m12}, {m21, m22}}};
}

Mat2 plus_identity(const Mat2& m) {
  Mat2 r = m;
  r[0][0] += 1.0;
  r[1][1] += 1.0;
  return r;
}

Mat2 identity_minus(const Mat2& m) {
  Mat2 r = make2(1.0 - m[0][0], -m[0][1], -m[1][0], 1.0 - m[1][1]);
  return r;
}

Mat2 scaled(const Mat2& m, double f) {
  Mat2 r = m;
  for (auto& row : r)
    for (auto& z : row) z *= f;
  return r;
}

using CMatrix2 = std::array<std::array<Complex, 2>, 2>;

void check_pair(const EffectiveQubitPair& pair) {
  const FieldState* fs[2] = {&pair.f1, &pair.f2};
  const FieldState* gs[2] = {&pair.g1, &pair.g2};
  for (const FieldState* f : fs)
    if (!f->restricted_to(Party::A))
      throw StructuralError("pair f-vectors must be restricted to party A");
  for (const FieldState* g : gs)
    if (!g->restricted_to(Party::B))
      throw StructuralError("pair g-vectors must be restricted to party B");
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Complex fij = inner_product(*fs[i], *fs[j]);
      const Complex gij = inner_product(*gs[i], *gs[j]);
      const Complex expected = (i == j) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
      if (std::abs(fij - expected) > 1e-8 || std::abs(gij - expected) > 1e-8)
        throw StructuralError("pair vectors are not orthonormal");
    }
}

void check_pair(const FieldState& s, const EffectiveQubitPair& pair) {
  if (pair.f1.partition() != s.partition())
    throw StructuralError("pair vectors and state live on different partitions");
  check_pair(pair);
}

CMatrix2 effective_amplitude_matrix(const FieldState& s, const EffectiveQubitPair& pair) {
  CMatrix2 c;
  c[0][0] = overlap_with_product(s, pair.f1, pair.g1);
  c[0][1] = overlap_with_product(s, pair.f1, pair.g2);
  c[1][0] = overlap_with_product(s, pair.f2, pair.g1);
  c[1][1] = overlap_with_product(s, pair.f2, pair.g2);
  return c;
}

// Gram matrix of the one-sided contractions against the pair vectors.
CMatrix2 overlap_gram(const FieldState& s, const FieldState& v1, const FieldState& v2,
                      Party side) {
  const FieldState w1 = partial_overlap(s, v1, side);
  const FieldState w2 = partial_overlap(s, v2, side);
  CMatrix2 gram;
  gram[0][0] = inner_product(w1, w1);
  gram[0][1] = inner_product(w1, w2);
  gram[1][0] = inner_product(w2, w1);
  gram[1][1] = inner_product(w2, w2);
  return gram;
}

double bilinear_expectation(const CMatrix2& c, const Mat2& ma, const Mat2& mb) {
  Complex sum{0.0, 0.0};
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 2; ++n)
      for (int kp = 0; kp < 2; ++kp)
        for (int np = 0; np < 2; ++np)
          sum += std::conj(c[k][n]) * ma[k][kp] * mb[n][np] * c[kp][np];
  return sum.real();
}

double local_expectation(const CMatrix2& gram, const Mat2& m) {
  Complex sum{0.0, 0.0};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) sum += m[i][j] * gram[i][j];
  return sum.real();
}

}  // namespace

double normalize_angle(double radians) {
  double x = std::fmod(radians, 2.0 * kPi);
  if (x <= -kPi) x += 2.0 * kPi;
  if (x > kPi) x -= 2.0 * kPi;
  return x;
}

Mat2 field_sigma_a(char axis) {
  switch (axis) {
    case 'x': return make2(0.0, 1.0, 1.0, 0.0);
    case 'y': return make2(0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0);
    case 'z': return make2(1.0, 0.0, 0.0, -1.0);
  }
  throw StructuralError("unknown Pauli axis");
}

Mat2 field_sigma_b(char axis) {
  // Written in the (g1, g2) basis; the basis flip turns y and z around.
  switch (axis) {
    case 'x': return make2(0.0, 1.0, 1.0, 0.0);
    case 'y': return make2(0.0, Complex{0.0, 1.0}, Complex{0.0, -1.0}, 0.0);
    case 'z': return make2(-1.0, 0.0, 0.0, 1.0);
  }
  throw StructuralError("unknown Pauli axis");
}

Mat2 setting_operator_a(double alpha) {
  const double c = std::cos(alpha), s = std::sin(alpha);
  return make2(c, s, s, -c);
}

Mat2 setting_operator_b(double beta) {
  const double c = std::cos(beta), s = std::sin(beta);
  return make2(-c, s, s, c);
}

FieldState EffectiveQubitPair::normalized_pair_state() const {
  const double norm = std::sqrt(lambda1 * lambda1 + lambda2 * lambda2);
  if (norm == 0.0) throw StructuralError("pair coefficients are both zero");
  FieldState out(f1.partition(), f1.statistics(), f1.truncation());
  const FieldState t1 = tensor_restricted(f1, g1);
  const FieldState t2 = tensor_restricted(f2, g2);
  for (const auto& [key, amp] : t1.amplitudes()) out.add_amplitude(key, amp * (lambda1 / norm));
  for (const auto& [key, amp] : t2.amplitudes()) out.add_amplitude(key, amp * (lambda2 / norm));
  return out;
}

EffectiveQubitPair effective_pair_from_schmidt(const SchmidtDecomposition& d) {
  if (d.rank() < 2)
    throw SeparableStateError("state is separable: Schmidt rank < 2, no effective qubit pair");
  EffectiveQubitPair pair;
  pair.lambda1 = d.coefficients[0];
  pair.lambda2 = d.coefficients[1];
  pair.f1 = d.a_vectors[0];
  pair.f2 = d.a_vectors[1];
  pair.g1 = d.b_vectors[0];
  pair.g2 = d.b_vectors[1];
  return pair;
}

SettingAngles gisin_settings(double lambda1, double lambda2) {
  if (lambda1 == 0.0 || lambda2 == 0.0)
    throw StructuralError("closed-form settings need two non-zero coefficients");
  const double product = std::abs(lambda1 * lambda2) / (lambda1 * lambda1 + lambda2 * lambda2);
  const double sign = (lambda1 * lambda2 >= 0.0) ? 1.0 : -1.0;
  const double cos_beta = 1.0 / std::sqrt(1.0 + 4.0 * product);
  SettingAngles angles;
  angles.alpha = 0.0;
  angles.alpha_prime = -sign * kPi / 2.0;
  // Only the cosines are pinned; positive sines put the violation on the
  // first conditional branch.
  angles.beta = std::acos(cos_beta);
  angles.beta_prime = kPi - std::acos(cos_beta);
  return angles;
}

ChReport ch_probabilities(const FieldState& s, const EffectiveQubitPair& pair,
                          const SettingAngles& settings) {
  check_pair(s, pair);
  if (std::abs(s.norm_squared() - 1.0) > 1e-6)
    throw ValidationError("ch_probabilities expects a normalized state");

  const Mat2 a = setting_operator_a(settings.alpha);
  const Mat2 ap = setting_operator_a(settings.alpha_prime);
  const Mat2 b = setting_operator_b(settings.beta);
  const Mat2 bp = setting_operator_b(settings.beta_prime);

  const CMatrix2 c = effective_amplitude_matrix(s, pair);
  const CMatrix2 gram_a = overlap_gram(s, pair.f1, pair.f2, Party::A);
  const CMatrix2 gram_b = overlap_gram(s, pair.g1, pair.g2, Party::B);

  auto joint = [&](const Mat2& ma, const Mat2& mb) {
    return 0.25 * bilinear_expectation(c, plus_identity(ma), identity_minus(mb));
  };
  auto marginal_a = [&](const Mat2& ma) {
    return 0.5 * local_expectation(gram_a, plus_identity(ma));
  };
  auto marginal_b = [&](const Mat2& mb) {
    return 0.5 * local_expectation(gram_b, identity_minus(mb));
  };

  ChReport report;
  const double p_ab = joint(a, b);
  const double p_abp = joint(a, bp);
  const double p_apb = joint(ap, b);
  const double p_apbp = joint(ap, bp);
  const double p_a = marginal_a(a);
  const double p_ap = marginal_a(ap);
  const double p_b = marginal_b(b);
  const double p_bp = marginal_b(bp);

  report.probabilities = {
      {"p00(a,b)", p_ab},   {"p00(a,b')", p_abp}, {"p00(a',b)", p_apb},
      {"p00(a',b')", p_apbp}, {"p0(a)", p_a},     {"p0(a')", p_ap},
      {"p0(b)", p_b},       {"p0(b')", p_bp},
  };
  for (const auto& [name, value] : report.probabilities)
    if (value < -1e-9 || value > 1.0 + 1e-9)
      throw NumericError("probability out of range: " + name);
  const double joints[4] = {p_ab, p_abp, p_apb, p_apbp};
  const double bounds[4][2] = {{p_a, p_b}, {p_a, p_bp}, {p_ap, p_b}, {p_ap, p_bp}};
  for (int i = 0; i < 4; ++i)
    if (joints[i] > bounds[i][0] + 1e-9 || joints[i] > bounds[i][1] + 1e-9)
      throw NumericError("joint probability exceeds a marginal");

  // Dichotomic correlation matching the probability operators: outcome 0 on
  // side B is the -1 eigenvalue, so the relabeled observable is -B and the
  // identity E = 4 p00 - 2 p0a - 2 p0b + 1 holds on the effective block.
  const double e_ab = -bilinear_expectation(c, a, b);
  const double e_abp = -bilinear_expectation(c, a, bp);
  const double e_apb = -bilinear_expectation(c, ap, b);
  const double e_apbp = -bilinear_expectation(c, ap, bp);

  report.ch_branch1 = p_ab + p_apb + p_apbp - p_abp - p_ap - p_b;
  report.ch_branch2 = p_abp + p_apb + p_apbp - p_ab - p_ap - p_bp;
  report.chsh_branch1 = e_ab - e_abp + e_apb + e_apbp;
  report.chsh_branch2 = e_abp - e_ab + e_apb + e_apbp;
  report.selected_branch = (e_ab >= e_abp) ? ChBranch::One : ChBranch::Two;
  report.selected_ch =
      (report.selected_branch == ChBranch::One) ? report.ch_branch1 : report.ch_branch2;
  report.violation = report.selected_ch > 0.0;
  report.effective_amplitudes = c;
  return report;
}

double correlation(const FieldState& s, const EffectiveQubitPair& pair, double alpha,
                   double beta) {
  check_pair(s, pair);
  const CMatrix2 c = effective_amplitude_matrix(s, pair);
  return bilinear_expectation(c, setting_operator_a(alpha), setting_operator_b(beta));
}

SettingsSearchResult optimize_settings(const EffectiveQubitPair& pair,
                                       const SettingsSearchConfig& config) {
  const FieldState phi = pair.normalized_pair_state();
  const CMatrix2 c = effective_amplitude_matrix(phi, pair);

  // Dichotomic correlation (outcome 0 on B is the -1 eigenvalue, hence the
  // sign): E(alpha, beta) = P(alpha) cos(beta) + Q(alpha) sin(beta). beta and
  // beta' enter the branch-1 expression through independent terms, so for
  // fixed (alpha, alpha') the maximum over both is exact.
  const double gzz = -bilinear_expectation(c, field_sigma_a('z'), field_sigma_b('z'));
  const double gzx = -bilinear_expectation(c, field_sigma_a('z'), field_sigma_b('x'));
  const double gxz = -bilinear_expectation(c, field_sigma_a('x'), field_sigma_b('z'));
  const double gxx = -bilinear_expectation(c, field_sigma_a('x'), field_sigma_b('x'));

  auto p_of = [&](double alpha) { return gzz * std::cos(alpha) + gxz * std::sin(alpha); };
  auto q_of = [&](double alpha) { return gzx * std::cos(alpha) + gxx * std::sin(alpha); };
  auto objective = [&](double alpha, double alpha_prime) {
    const double p1 = p_of(alpha), q1 = q_of(alpha);
    const double p2 = p_of(alpha_prime), q2 = q_of(alpha_prime);
    return std::hypot(p1 + p2, q1 + q2) + std::hypot(p2 - p1, q2 - q1);
  };

  const double step = std::min(config.grid_step_deg, 2.0) * kPi / 180.0;
  const int n = static_cast<int>(std::ceil(2.0 * kPi / step));
  double best_value = -1.0;
  double best_alpha = 0.0, best_alpha_prime = 0.0;
  for (int i = 0; i < n; ++i) {
    const double alpha = -kPi + (i + 1) * 2.0 * kPi / n;
    for (int j = 0; j < n; ++j) {
      const double alpha_prime = -kPi + (j + 1) * 2.0 * kPi / n;
      const double value = objective(alpha, alpha_prime);
      if (value > best_value) {
        best_value = value;
        best_alpha = alpha;
        best_alpha_prime = alpha_prime;
      }
    }
  }

  // Seed with the closed-form angles as well; refinement keeps the better one.
  {
    const SettingAngles seed = gisin_settings(pair.lambda1, pair.lambda2);
    const double value = objective(seed.alpha, seed.alpha_prime);
    if (value > best_value) {
      best_value = value;
      best_alpha = seed.alpha;
      best_alpha_prime = seed.alpha_prime;
    }
  }

  double window = 2.0 * kPi / n;
  for (int round = 0; round < config.refine_rounds; ++round) {
    for (int coord = 0; coord < 2; ++coord) {
      double& x = (coord == 0) ? best_alpha : best_alpha_prime;
      double lo = x - window, hi = x + window;
      for (int iter = 0; iter < 24; ++iter) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        const double f1 = (coord == 0) ? objective(m1, best_alpha_prime) : objective(best_alpha, m1);
        const double f2 = (coord == 0) ? objective(m2, best_alpha_prime) : objective(best_alpha, m2);
        if (f1 < f2)
          lo = m1;
        else
          hi = m2;
      }
      x = 0.5 * (lo + hi);
    }
    window *= 0.6;
  }
  best_value = objective(best_alpha, best_alpha_prime);

  SettingsSearchResult result;
  const double p1 = p_of(best_alpha), q1 = q_of(best_alpha);
  const double p2 = p_of(best_alpha_prime), q2 = q_of(best_alpha_prime);
  result.angles.alpha = normalize_angle(best_alpha);
  result.angles.alpha_prime = normalize_angle(best_alpha_prime);
  result.angles.beta = normalize_angle(std::atan2(q1 + q2, p1 + p2));
  result.angles.beta_prime = normalize_angle(std::atan2(q2 - q1, p2 - p1));
  result.chsh_max = best_value;
  return result;
}

ChOperator::ChOperator(EffectiveQubitPair pair, SettingAngles settings, ChBranch branch)
    : pair_(std::move(pair)), settings_(settings), branch_(branch) {
  check_pair(pair_);
  const Mat2 a = setting_operator_a(settings_.alpha);
  const Mat2 ap = setting_operator_a(settings_.alpha_prime);
  const Mat2 b = setting_operator_b(settings_.beta);
  const Mat2 bp = setting_operator_b(settings_.beta_prime);

  local_a_ = scaled(plus_identity(ap), 0.5);
  local_b_ = scaled(identity_minus(branch_ == ChBranch::One ? b : bp), 0.5);

  // Joint part: sum of the four p00 operators with branch signs, each
  // 1/4 (I + A) (x) (I - B) on the composite (k, n) index.
  struct Term {
    const Mat2* ma;
    const Mat2* mb;
    double sign;
  };
  const std::array<Term, 4> terms =
      (branch_ == ChBranch::One)
          ? std::array<Term, 4>{{{&a, &b, 1.0}, {&ap, &b, 1.0}, {&ap, &bp, 1.0}, {&a, &bp, -1.0}}}
          : std::array<Term, 4>{{{&a, &bp, 1.0}, {&ap, &b, 1.0}, {&ap, &bp, 1.0}, {&a, &b, -1.0}}};

  for (auto& row : nonlocal_) row.fill(Complex{0.0, 0.0});
  for (const Term& term : terms) {
    const Mat2 ma = plus_identity(*term.ma);
    const Mat2 mb = identity_minus(*term.mb);
    for (int k = 0; k < 2; ++k)
      for (int n = 0; n < 2; ++n)
        for (int kp = 0; kp < 2; ++kp)
          for (int np = 0; np < 2; ++np)
            nonlocal_[2 * k + n][2 * kp + np] += 0.25 * term.sign * ma[k][kp] * mb[n][np];
  }
}

double ChOperator::nonlocal_expectation(const FieldState& s) const {
  const CMatrix2 c = effective_amplitude_matrix(s, pair_);
  Complex sum{0.0, 0.0};
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 2; ++n)
      for (int kp = 0; kp < 2; ++kp)
        for (int np = 0; np < 2; ++np)
          sum += std::conj(c[k][n]) * nonlocal_[2 * k + n][2 * kp + np] * c[kp][np];
  return sum.real();
}

double ChOperator::local_a_expectation(const FieldState& s) const {
  return local_expectation(overlap_gram(s, pair_.f1, pair_.f2, Party::A), local_a_);
}

double ChOperator::local_b_expectation(const FieldState& s) const {
  return local_expectation(overlap_gram(s, pair_.g1, pair_.g2, Party::B), local_b_);
}

double ChOperator::expectation(const FieldState& s) const {
  return nonlocal_expectation(s) - local_a_expectation(s) - local_b_expectation(s);
}

FieldState ChOperator::apply(const FieldState& s) const {
  const FieldState* fs[2] = {&pair_.f1, &pair_.f2};
  const FieldState* gs[2] = {&pair_.g1, &pair_.g2};
  const CMatrix2 c = effective_amplitude_matrix(s, pair_);

  FieldState out(s.partition(), s.statistics(), s.truncation());
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 2; ++n) {
      Complex coef{0.0, 0.0};
      for (int kp = 0; kp < 2; ++kp)
        for (int np = 0; np < 2; ++np) coef += nonlocal_[2 * k + n][2 * kp + np] * c[kp][np];
      if (coef == Complex{0.0, 0.0}) continue;
      const FieldState product = tensor_restricted(*fs[k], *gs[n]);
      for (const auto& [key, amp] : product.amplitudes()) out.add_amplitude(key, coef * amp);
    }
  for (int kp = 0; kp < 2; ++kp) {
    const FieldState w = partial_overlap(s, *fs[kp], Party::A);
    if (w.is_zero()) continue;
    for (int k = 0; k < 2; ++k) {
      if (local_a_[k][kp] == Complex{0.0, 0.0}) continue;
      const FieldState product = tensor_restricted(*fs[k], w);
      for (const auto& [key, amp] : product.amplitudes())
        out.add_amplitude(key, -local_a_[k][kp] * amp);
    }
  }
  for (int np = 0; np < 2; ++np) {
    const FieldState v = partial_overlap(s, *gs[np], Party::B);
    if (v.is_zero()) continue;
    for (int n = 0; n < 2; ++n) {
      if (local_b_[n][np] == Complex{0.0, 0.0}) continue;
      const FieldState product = tensor_restricted(v, *gs[n]);
      for (const auto& [key, amp] : product.amplitudes())
        out.add_amplitude(key, -local_b_[n][np] * amp);
    }
  }
  return out;
}

BellOperatorDecomposition decompose_ch_expectation(const ChOperator& op, const FieldState& s,
                                                   int sector_n, int sector_m) {
  BellOperatorDecomposition parts;
  parts.nl_expectation = op.nonlocal_expectation(s);
  parts.loc_a_expectation = op.local_a_expectation(s);
  parts.loc_b_expectation = op.local_b_expectation(s);
  const FieldState mismatched_a = filtered(s, [sector_n, sector_m](const BasisKey& key) {
    return key.a_occ.total() == sector_n && key.b_occ.total() != sector_m;
  });
  const FieldState mismatched_b = filtered(s, [sector_n, sector_m](const BasisKey& key) {
    return key.b_occ.total() == sector_m && key.a_occ.total() != sector_n;
  });
  parts.leakage_a = op.local_a_expectation(mismatched_a);
  parts.leakage_b = op.local_b_expectation(mismatched_b);
  return parts;
}

ScalingLawValues verify_scaling_law(const FieldState& s, const SchmidtDecomposition& d,
                                    const SettingAngles& settings) {
  const EffectiveQubitPair pair = effective_pair_from_schmidt(d);
  const ChReport full = ch_probabilities(s, pair, settings);
  const FieldState phi = pair.normalized_pair_state();
  const ChReport block = ch_probabilities(phi, pair, settings);
  ScalingLawValues values;
  values.full_state_ch = full.selected_ch;
  values.rescaled_pair_ch =
      (pair.lambda1 * pair.lambda1 + pair.lambda2 * pair.lambda2) * block.selected_ch;
  return values;
}

double lhv_max_ch(ChBranch branch) {
  double best = -4.0;
  for (int a0 = 0; a0 < 2; ++a0)
    for (int a1 = 0; a1 < 2; ++a1)
      for (int b0 = 0; b0 < 2; ++b0)
        for (int b1 = 0; b1 < 2; ++b1) {
          const double pa[2] = {a0 == 0 ? 1.0 : 0.0, a1 == 0 ? 1.0 : 0.0};
          const double pb[2] = {b0 == 0 ? 1.0 : 0.0, b1 == 0 ? 1.0 : 0.0};
          auto p00 = [&](int i, int j) { return pa[i] * pb[j]; };
          const double value =
              (branch == ChBranch::One)
                  ? p00(0, 0) + p00(1, 0) + p00(1, 1) - p00(0, 1) - pa[1] - pb[0]
                  : p00(0, 1) + p00(1, 0) + p00(1, 1) - p00(0, 0) - pa[1] - pb[1];
          best = std::max(best, value);
        }
  return best;
}

double lhv_max_chsh(ChBranch branch) {
  double best = -8.0;
  for (int a0 = 0; a0 < 2; ++a0)
    for (int a1 = 0; a1 < 2; ++a1)
      for (int b0 = 0; b0 < 2; ++b0)
        for (int b1 = 0; b1 < 2; ++b1) {
          const double sa[2] = {a0 == 0 ? 1.0 : -1.0, a1 == 0 ? 1.0 : -1.0};
          const double sb[2] = {b0 == 0 ? 1.0 : -1.0, b1 == 0 ? 1.0 : -1.0};
          auto e = [&](int i, int j) { return sa[i] * sb[j]; };
          const double value = (branch == ChBranch::One)
                                   ? e(0, 0) - e(0, 1) + e(1, 0) + e(1, 1)
                                   : e(0, 1) - e(0, 0) + e(1, 0) + e(1, 1);
          best = std::max(best, value);
        }
  return best;
}

SettingAngles resolve_settings(const SettingsChoice& choice, const EffectiveQubitPair& pair) {
  switch (choice.source) {
    case SettingsChoice::Source::ClosedForm:
      return gisin_settings(pair.lambda1, pair.lambda2);
    case SettingsChoice::Source::Numeric:
      return optimize_settings(pair).angles;
    case SettingsChoice::Source::Explicit: {
      SettingAngles angles = choice.explicit_angles;
      angles.alpha = normalize_angle(angles.alpha);
      angles.alpha_prime = normalize_angle(angles.alpha_prime);
      angles.beta = normalize_angle(angles.beta);
      angles.beta_prime = normalize_angle(angles.beta_prime);
      return angles;
    }
  }
  throw StructuralError("unknown settings source");
}

}  // namespace fockbell
