#include "fockbell/states.hpp"

#include <algorithm>
#include <cmath>

#include "fockbell/errors.hpp"

namespace fockbell {

namespace {

double sqrt_factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= std::sqrt(static_cast<double>(k));
  return r;
}

Occupation occ(std::vector<std::pair<ModeId, int>> counts) { return Occupation(std::move(counts)); }

FieldState finalize(FieldState raw) {
  const double kept = raw.norm_squared();
  raw.set_pruned_weight(raw.pruned_weight() / std::max(kept + raw.pruned_weight(), 1e-300));
  if (raw.is_zero()) throw ValidationError("generator produced a zero state within the cutoff");
  FieldState out = raw.normalized();
  out.set_pruned_weight(raw.pruned_weight());
  return out;
}

}  // namespace

FieldState tmsv_from_lambdas(std::span<const double> lambdas, int cutoff) {
  if (std::all_of(lambdas.begin(), lambdas.end(), [](double x) { return x == 0.0; }))
    throw ValidationError("tmsv coefficients are all zero");
  ModePartition partition({mode_a(1)}, {mode_b(1)});
  FieldState s(partition, FieldStatistics::Boson, TruncationPolicy{cutoff, 1e-12});
  for (std::size_t n = 0; n < lambdas.size(); ++n) {
    if (lambdas[n] == 0.0) continue;
    BasisKey key{occ({{mode_a(1), static_cast<int>(n)}}), occ({{mode_b(1), static_cast<int>(n)}})};
    s.add_amplitude(key, lambdas[n]);
  }
  return finalize(std::move(s));
}

FieldState tmsv(double gamma, int cutoff) {
  if (gamma < 0.0) throw ValidationError("gain must be non-negative");
  std::vector<double> lambdas(static_cast<std::size_t>(cutoff) + 1);
  const double t = std::tanh(gamma);
  double term = 1.0 / std::cosh(gamma);
  for (auto& l : lambdas) {
    l = term;
    term *= t;
  }
  FieldState s = tmsv_from_lambdas(lambdas, cutoff);
  // tail of the exact spectrum: sum_{n > cutoff} tanh^{2n}/cosh^2
  s.set_pruned_weight(std::pow(t, 2 * (cutoff + 1)));
  return s;
}

FieldState bsv(double gamma, int cutoff) {
  if (gamma < 0.0) throw ValidationError("gain must be non-negative");
  ModePartition partition({mode_a(1), mode_a(2)}, {mode_b(1), mode_b(2)});
  FieldState s(partition, FieldStatistics::Boson, TruncationPolicy{cutoff, 1e-12});
  const double t = std::tanh(gamma);
  const double prefactor = 1.0 / (std::cosh(gamma) * std::cosh(gamma));
  double tn = 1.0;
  for (int n = 0; n <= cutoff; ++n) {
    for (int m = 0; m <= n; ++m) {
      const double amp = prefactor * tn * ((m % 2 == 0) ? 1.0 : -1.0);
      BasisKey key{occ({{mode_a(1), n - m}, {mode_a(2), m}}),
                   occ({{mode_b(1), m}, {mode_b(2), n - m}})};
      s.add_amplitude(key, amp);
    }
    tn *= t;
  }
  FieldState out = finalize(std::move(s));
  // tail: sum_{n > cutoff} (n+1) tanh^{2n}/cosh^4 = (N+2) x^{N+1} - (N+1) x^{N+2}
  const double x = t * t;
  out.set_pruned_weight((cutoff + 2) * std::pow(x, cutoff + 1) -
                        (cutoff + 1) * std::pow(x, cutoff + 2));
  return out;
}

FieldState bghz(std::span<const Complex> coefficients, int cutoff) {
  if (std::all_of(coefficients.begin(), coefficients.end(),
                  [](Complex c) { return c == Complex{0.0, 0.0}; }))
    throw ValidationError("bghz coefficients are all zero");
  ModePartition partition({mode_a(1), mode_a(2), mode_a(3), mode_a(4)}, {mode_b(1), mode_b(2)});
  FieldState s(partition, FieldStatistics::Boson, TruncationPolicy{cutoff, 1e-12});
  const int kmax = static_cast<int>(coefficients.size()) - 1;
  for (int k = 0; k <= kmax; ++k) {
    for (int m = 0; m <= k; ++m) {
      const Complex c = coefficients[k - m] * coefficients[m];
      if (c == Complex{0.0, 0.0}) continue;
      const int p = k - m;
      // (a1+ a2+ b1+)^p (a3+ a4+ b2+)^m on vacuum: each mode raised q times
      // contributes sqrt(q!).
      const double ladder = std::pow(sqrt_factorial(p), 3) * std::pow(sqrt_factorial(m), 3);
      BasisKey key{occ({{mode_a(1), p}, {mode_a(2), p}, {mode_a(3), m}, {mode_a(4), m}}),
                   occ({{mode_b(1), p}, {mode_b(2), m}})};
      s.add_amplitude(key, c * ladder);
    }
  }
  return finalize(std::move(s));
}

FieldState beamsplit_single_photon(int cutoff) {
  ModePartition partition({mode_a(1)}, {mode_b(1)});
  FieldState s(partition, FieldStatistics::Boson, TruncationPolicy{cutoff, 1e-12});
  const double amp = 1.0 / std::sqrt(2.0);
  s.add_amplitude(BasisKey{Occupation{}, occ({{mode_b(1), 1}})}, amp);
  s.add_amplitude(BasisKey{occ({{mode_a(1), 1}}), Occupation{}}, amp);
  return s;
}

FieldState attach_coherent_ancillas(const FieldState& s, Complex z, int cutoff) {
  auto next_index = [](const std::vector<ModeId>& modes) {
    int next = 1;
    for (const auto& m : modes) next = std::max(next, m.index + 1);
    return next;
  };
  const ModeId anc_a = mode_a(next_index(s.partition().a_modes()));
  const ModeId anc_b = mode_b(next_index(s.partition().b_modes()));

  auto coherent = [&](const ModeId& mode) {
    ModePartition partition = (mode.party == Party::A)
                                  ? ModePartition({mode}, {})
                                  : ModePartition({}, {mode});
    FieldState anc(partition, s.statistics(), s.truncation());
    const double weight = std::exp(-0.5 * std::norm(z));
    Complex amp{weight, 0.0};
    for (int k = 0; k <= cutoff; ++k) {
      BasisKey key;
      (mode.party == Party::A ? key.a_occ : key.b_occ) = occ({{mode, k}});
      anc.add_amplitude(key, amp);
      amp *= z / std::sqrt(static_cast<double>(k + 1));
    }
    anc.set_pruned_weight(1.0 - anc.norm_squared());
    return anc;
  };

  FieldState with_a = tensor_with_ancilla(s, coherent(anc_a));
  FieldState with_both = tensor_with_ancilla(with_a, coherent(anc_b));
  return finalize(std::move(with_both));
}

FieldState photon_subtract(const FieldState& s, std::span<const ModeId> modes) {
  if (modes.empty()) throw StructuralError("photon subtraction needs at least one mode");
  FieldState sum(s.partition(), s.statistics(), s.truncation());
  for (const ModeId& mode : modes) {
    const FieldState term = apply_annihilation(s, mode);
    for (const auto& [key, amp] : term.amplitudes()) sum.add_amplitude(key, amp);
  }
  sum.apply_floor();
  if (sum.is_zero()) throw ValidationError("photon subtraction annihilated the state");
  return sum.normalized();
}

}  // namespace fockbell
