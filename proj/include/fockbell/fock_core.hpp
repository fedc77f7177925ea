#pragma once

#include <compare>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fockbell/errors.hpp"

namespace fockbell {

using Complex = std::complex<double>;

enum class Party { A, B };

// A single field mode. `field_tag` distinguishes particle species when more
// than one field is present; creation operators of different tags commute.
struct ModeId {
  Party party = Party::A;
  int field_tag = 0;
  int index = 0;

  auto operator<=>(const ModeId&) const = default;
};

ModeId mode_a(int index, int field_tag = 0);
ModeId mode_b(int index, int field_tag = 0);
std::string to_string(const ModeId& m);

enum class FieldStatistics { Boson, Fermion };

// Sparse occupation-number vector: sorted (mode, count) entries, counts > 0.
class Occupation {
 public:
  Occupation() = default;
  explicit Occupation(std::vector<std::pair<ModeId, int>> counts);

  int count(const ModeId& m) const;
  int total() const;
  Occupation with_count(const ModeId& m, int n) const;
  bool empty() const { return entries_.empty(); }
  const std::vector<std::pair<ModeId, int>>& entries() const { return entries_; }

  auto operator<=>(const Occupation&) const = default;

 private:
  std::vector<std::pair<ModeId, int>> entries_;
};

// Occupation-number basis element of the bipartite Fock space.
struct BasisKey {
  Occupation a_occ;
  Occupation b_occ;

  auto operator<=>(const BasisKey&) const = default;
};

// Split of the mode set into the two parties. Mode lists are kept sorted so
// that key canonicalization and basis enumeration are deterministic.
class ModePartition {
 public:
  ModePartition() = default;
  ModePartition(std::vector<ModeId> a_modes, std::vector<ModeId> b_modes);

  const std::vector<ModeId>& a_modes() const { return a_modes_; }
  const std::vector<ModeId>& b_modes() const { return b_modes_; }
  const std::vector<ModeId>& modes(Party p) const {
    return p == Party::A ? a_modes_ : b_modes_;
  }
  bool contains(const ModeId& m) const;

  bool operator==(const ModePartition&) const = default;

 private:
  std::vector<ModeId> a_modes_;
  std::vector<ModeId> b_modes_;
};

ModePartition merge_partitions(const ModePartition& x, const ModePartition& y);

// Finite surrogate for the infinite Fock space: per-party total-quanta cap
// plus a floor below which amplitudes are not stored.
struct TruncationPolicy {
  int max_quanta_per_side = 8;
  double amplitude_floor = 1e-12;
};

// A pure state as a sparse complex amplitude map over canonical basis keys.
// States are value types; every operation below is a pure function of its
// inputs, so concurrent reads are safe. Amplitude iteration order is the
// key order, which fixes all summation orders.
class FieldState {
 public:
  FieldState() = default;
  FieldState(ModePartition partition, FieldStatistics stats, TruncationPolicy truncation);

  const ModePartition& partition() const { return partition_; }
  FieldStatistics statistics() const { return stats_; }
  const TruncationPolicy& truncation() const { return truncation_; }
  const std::map<BasisKey, Complex>& amplitudes() const { return amplitudes_; }

  // Weight lost to the quanta cap, accumulated across operations.
  double pruned_weight() const { return pruned_weight_; }
  void set_pruned_weight(double w) { pruned_weight_ = w; }

  Complex amplitude(const BasisKey& key) const;

  // Accumulates into the map, enforcing the truncation policy. Over-cap
  // contributions land in pruned_weight instead of the map.
  void add_amplitude(const BasisKey& key, Complex value);

  double norm_squared() const;
  double norm() const;
  bool is_zero() const { return amplitudes_.empty(); }
  FieldState normalized() const;

  // Drops stored amplitudes with modulus below the floor.
  void apply_floor();

  // True when every key has empty occupation on the other party.
  bool restricted_to(Party side) const;

 private:
  ModePartition partition_;
  FieldStatistics stats_ = FieldStatistics::Boson;
  TruncationPolicy truncation_;
  std::map<BasisKey, Complex> amplitudes_;
  double pruned_weight_ = 0.0;
};

// --- state algebra ---------------------------------------------------------

Complex inner_product(const FieldState& x, const FieldState& y);

FieldState apply_creation(const FieldState& s, const ModeId& m);
FieldState apply_annihilation(const FieldState& s, const ModeId& m);

struct ProjectionResult {
  double weight = 0.0;
  std::optional<FieldState> state;  // renormalized, present iff weight > 0
};

// Projection onto the subspace with exactly n quanta on party A and m on B.
ProjectionResult project_fixed_numbers(const FieldState& s, int n, int m);

// Unnormalized component of s in the (n, m) sector.
FieldState sector_component(const FieldState& s, int n, int m);

// Keys of s satisfying pred, amplitudes unchanged (unnormalized).
FieldState filtered(const FieldState& s, const std::function<bool(const BasisKey&)>& pred);

// Sector (n, m) -> squared weight, enumerated over the support of s.
std::map<std::pair<int, int>, double> sector_weights(const FieldState& s);

// Contraction of s with a one-party vector v: returns w on the other party
// with w(other) = sum_side conj(v(side)) * s(side, other), so that
// <w|w> = <s| (|v><v| (x) Id) |s>.
FieldState partial_overlap(const FieldState& s, const FieldState& v, Party side);

// Product of two one-party vectors on a common partition.
FieldState tensor_restricted(const FieldState& a_side, const FieldState& b_side);

// <f (x) g | s> for one-party vectors f (A side) and g (B side).
Complex overlap_with_product(const FieldState& s, const FieldState& f, const FieldState& g);

// Product state on the union mode set; anc must live on fresh modes of a
// single party.
FieldState tensor_with_ancilla(const FieldState& s, const FieldState& anc);

}  // namespace fockbell
