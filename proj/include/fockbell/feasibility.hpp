#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fockbell/bell.hpp"
#include "fockbell/fock_core.hpp"
#include "fockbell/schmidt.hpp"

namespace fockbell {

struct SectorRecord {
  int n = 0;
  int m = 0;
  double weight = 0.0;
  int rank = 0;
  std::optional<FieldState> projected;  // renormalized, present iff weight > weight_tolerance
};

// Per-sector view of a state: weight and Schmidt rank of every populated
// (n, m) particle-number sector, ordered by (n + m, n).
struct SectorTable {
  std::vector<SectorRecord> records;
  double rank_tolerance = 1e-10;
  double weight_tolerance = 1e-12;
};

SectorTable sector_table(const FieldState& s, double rank_tol = 1e-10,
                         double weight_tol = 1e-12);

// Every populated sector is separable. When true, particle-number-non-mixing
// projective measurements cannot reveal the state's nonclassicality and
// ancillary resources (coherent ancilla modes or postselection) are needed.
bool all_sectors_separable(const SectorTable& t);

// Some populated sector is entangled: necessary (not sufficient) for a
// violation reachable with number-non-mixing projective measurements.
bool has_entangled_sector(const SectorTable& t);

using LinearOperator = std::function<FieldState(const FieldState&)>;

// Expectation of a sector-non-mixing operator evaluated as the weighted
// mixture of per-sector expectations; cross-checked against the direct
// quadratic form. Throws StructuralError if op mixes sectors on the support
// of s.
double sector_blockwise_expectation(const FieldState& s, const LinearOperator& op);

// Compression of an arbitrary operator to its sector-diagonal blocks.
LinearOperator sector_blocked(LinearOperator op);

// Outcome of building the CH functional on one sector's own Schmidt pair and
// applying it to the full state. full_ch = weight * projected_ch - leakage_a
// - leakage_b; the leakage terms are the local operators' weight in the
// mismatched sectors and are always non-negative.
struct SectorViolationReport {
  int n = 0;
  int m = 0;
  double weight = 0.0;
  int rank = 0;
  bool applicable = false;  // weight > 0 and rank >= 2
  SettingAngles settings{};
  ChBranch branch = ChBranch::One;
  double projected_ch = 0.0;
  double mismatch_weight_a = 0.0;  // weight with n quanta on A, anything but m on B
  double mismatch_weight_b = 0.0;  // weight with m quanta on B, anything but n on A
  double leakage_a = 0.0;
  double leakage_b = 0.0;
  double full_ch = 0.0;
  bool ns_condition_holds = false;       // rank >= 2 and leakage < weight * projected_ch
  bool simple_sufficient_holds = false;  // rank >= 2 and both mismatch weights vanish
};

SectorViolationReport sector_violation_report(const FieldState& s, int n, int m,
                                              const SettingsChoice& choice,
                                              double rank_tol = 1e-10,
                                              double weight_tol = 1e-12);

// True when the state splits into an entangled (n, m) block plus a remainder
// carrying no weight in the mismatched sectors, so the block's CH violation
// survives on the full state.
bool has_isolated_entangled_sector(const FieldState& s, int n, int m,
                                   double weight_tol = 1e-12, double rank_tol = 1e-10);

}  // namespace fockbell
