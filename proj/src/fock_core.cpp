#include "fockbell/fock_core.hpp"

#include <algorithm>
#include <cmath>

namespace fockbell {

namespace {

bool occupation_supported_on(const Occupation& occ, const std::vector<ModeId>& modes) {
  return std::all_of(occ.entries().begin(), occ.entries().end(), [&](const auto& e) {
    return std::binary_search(modes.begin(), modes.end(), e.first);
  });
}

// Parity of the number of same-species creation operators a creation/annihilation
// operator on mode m has to cross when the key is written in ascending mode order.
// Operators of distinct field tags commute, so only matching tags count.
int crossing_parity(const BasisKey& key, const ModeId& m) {
  int crossings = 0;
  for (const auto* occ : {&key.a_occ, &key.b_occ}) {
    for (const auto& [mode, count] : occ->entries()) {
      if (mode.field_tag == m.field_tag && mode < m) crossings += count;
    }
  }
  return crossings % 2;
}

Occupation merge_disjoint(const Occupation& x, const Occupation& y) {
  std::vector<std::pair<ModeId, int>> entries = x.entries();
  entries.insert(entries.end(), y.entries().begin(), y.entries().end());
  return Occupation(std::move(entries));
}

}  // namespace

ModeId mode_a(int index, int field_tag) { return ModeId{Party::A, field_tag, index}; }
ModeId mode_b(int index, int field_tag) { return ModeId{Party::B, field_tag, index}; }

std::string to_string(const ModeId& m) {
  std::string s = (m.party == Party::A ? "a" : "b") + std::to_string(m.index);
  if (m.field_tag != 0) s += "@" + std::to_string(m.field_tag);
  return s;
}

Occupation::Occupation(std::vector<std::pair<ModeId, int>> counts) : entries_(std::move(counts)) {
  std::sort(entries_.begin(), entries_.end());
  std::vector<std::pair<ModeId, int>> merged;
  for (const auto& [mode, count] : entries_) {
    if (count < 0) throw StructuralError("negative occupation count");
    if (count == 0) continue;
    if (!merged.empty() && merged.back().first == mode) {
      merged.back().second += count;
    } else {
      merged.emplace_back(mode, count);
    }
  }
  entries_ = std::move(merged);
}

int Occupation::count(const ModeId& m) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), m,
                             [](const auto& e, const ModeId& mode) { return e.first < mode; });
  return (it != entries_.end() && it->first == m) ? it->second : 0;
}

int Occupation::total() const {
  int t = 0;
  for (const auto& e : entries_) t += e.second;
  return t;
}

Occupation Occupation::with_count(const ModeId& m, int n) const {
  if (n < 0) throw StructuralError("negative occupation count");
  std::vector<std::pair<ModeId, int>> entries;
  entries.reserve(entries_.size() + 1);
  bool placed = false;
  for (const auto& e : entries_) {
    if (e.first == m) {
      if (n > 0) entries.emplace_back(m, n);
      placed = true;
    } else {
      entries.push_back(e);
    }
  }
  if (!placed && n > 0) entries.emplace_back(m, n);
  Occupation out;
  out.entries_ = std::move(entries);
  std::sort(out.entries_.begin(), out.entries_.end());
  return out;
}

ModePartition::ModePartition(std::vector<ModeId> a_modes, std::vector<ModeId> b_modes)
    : a_modes_(std::move(a_modes)), b_modes_(std::move(b_modes)) {
  std::sort(a_modes_.begin(), a_modes_.end());
  std::sort(b_modes_.begin(), b_modes_.end());
  for (const auto& m : a_modes_)
    if (m.party != Party::A) throw StructuralError("A-mode list contains a B mode");
  for (const auto& m : b_modes_)
    if (m.party != Party::B) throw StructuralError("B-mode list contains an A mode");
  auto has_duplicates = [](const std::vector<ModeId>& v) {
    return std::adjacent_find(v.begin(), v.end()) != v.end();
  };
  if (has_duplicates(a_modes_) || has_duplicates(b_modes_))
    throw StructuralError("duplicate mode in partition");
}

bool ModePartition::contains(const ModeId& m) const {
  const auto& list = modes(m.party);
  return std::binary_search(list.begin(), list.end(), m);
}

ModePartition merge_partitions(const ModePartition& x, const ModePartition& y) {
  for (const auto& m : y.a_modes())
    if (x.contains(m)) throw StructuralError("mode collision: " + to_string(m));
  for (const auto& m : y.b_modes())
    if (x.contains(m)) throw StructuralError("mode collision: " + to_string(m));
  std::vector<ModeId> a = x.a_modes();
  a.insert(a.end(), y.a_modes().begin(), y.a_modes().end());
  std::vector<ModeId> b = x.b_modes();
  b.insert(b.end(), y.b_modes().begin(), y.b_modes().end());
  return ModePartition(std::move(a), std::move(b));
}

FieldState::FieldState(ModePartition partition, FieldStatistics stats, TruncationPolicy truncation)
    : partition_(std::move(partition)), stats_(stats), truncation_(truncation) {}

Complex FieldState::amplitude(const BasisKey& key) const {
  auto it = amplitudes_.find(key);
  return it == amplitudes_.end() ? Complex{0.0, 0.0} : it->second;
}

void FieldState::add_amplitude(const BasisKey& key, Complex value) {
  if (value == Complex{0.0, 0.0}) return;
  if (!occupation_supported_on(key.a_occ, partition_.a_modes()) ||
      !occupation_supported_on(key.b_occ, partition_.b_modes()))
    throw StructuralError("basis key not supported on the state's partition");
  if (stats_ == FieldStatistics::Fermion) {
    for (const auto* occ : {&key.a_occ, &key.b_occ})
      for (const auto& e : occ->entries())
        if (e.second > 1) throw StructuralError("fermionic occupation exceeds 1");
  }
  if (key.a_occ.total() > truncation_.max_quanta_per_side ||
      key.b_occ.total() > truncation_.max_quanta_per_side) {
    pruned_weight_ += std::norm(value);
    return;
  }
  auto [it, inserted] = amplitudes_.try_emplace(key, value);
  if (!inserted) {
    it->second += value;
    if (it->second == Complex{0.0, 0.0}) amplitudes_.erase(it);
  }
}

double FieldState::norm_squared() const {
  double n2 = 0.0;
  for (const auto& [key, amp] : amplitudes_) n2 += std::norm(amp);
  return n2;
}

double FieldState::norm() const { return std::sqrt(norm_squared()); }

FieldState FieldState::normalized() const {
  const double n = norm();
  if (n == 0.0) throw ValidationError("cannot normalize a zero state");
  FieldState out = *this;
  for (auto& [key, amp] : out.amplitudes_) amp /= n;
  out.apply_floor();
  return out;
}

void FieldState::apply_floor() {
  for (auto it = amplitudes_.begin(); it != amplitudes_.end();) {
    if (std::abs(it->second) < truncation_.amplitude_floor)
      it = amplitudes_.erase(it);
    else
      ++it;
  }
}

bool FieldState::restricted_to(Party side) const {
  for (const auto& [key, amp] : amplitudes_) {
    const Occupation& other = (side == Party::A) ? key.b_occ : key.a_occ;
    if (!other.empty()) return false;
  }
  return true;
}

Complex inner_product(const FieldState& x, const FieldState& y) {
  if (x.partition() != y.partition() || x.statistics() != y.statistics())
    throw StructuralError("inner product requires identical partition and statistics");
  Complex sum{0.0, 0.0};
  for (const auto& [key, amp] : x.amplitudes()) {
    auto it = y.amplitudes().find(key);
    if (it != y.amplitudes().end()) sum += std::conj(amp) * it->second;
  }
  return sum;
}

FieldState apply_creation(const FieldState& s, const ModeId& m) {
  if (!s.partition().contains(m))
    throw StructuralError("creation mode not in partition: " + to_string(m));
  FieldState out(s.partition(), s.statistics(), s.truncation());
  out.set_pruned_weight(s.pruned_weight());
  const bool fermion = s.statistics() == FieldStatistics::Fermion;
  for (const auto& [key, amp] : s.amplitudes()) {
    const Occupation& occ = (m.party == Party::A) ? key.a_occ : key.b_occ;
    const int n = occ.count(m);
    if (fermion && n >= 1) continue;  // Pauli exclusion
    const double factor = std::sqrt(static_cast<double>(n + 1));
    const double sign = (fermion && crossing_parity(key, m)) ? -1.0 : 1.0;
    BasisKey new_key = key;
    Occupation& target = (m.party == Party::A) ? new_key.a_occ : new_key.b_occ;
    target = occ.with_count(m, n + 1);
    out.add_amplitude(new_key, amp * factor * sign);
  }
  out.apply_floor();
  return out;
}

FieldState apply_annihilation(const FieldState& s, const ModeId& m) {
  if (!s.partition().contains(m))
    throw StructuralError("annihilation mode not in partition: " + to_string(m));
  FieldState out(s.partition(), s.statistics(), s.truncation());
  out.set_pruned_weight(s.pruned_weight());
  const bool fermion = s.statistics() == FieldStatistics::Fermion;
  for (const auto& [key, amp] : s.amplitudes()) {
    const Occupation& occ = (m.party == Party::A) ? key.a_occ : key.b_occ;
    const int n = occ.count(m);
    if (n == 0) continue;
    const double factor = std::sqrt(static_cast<double>(n));
    const double sign = (fermion && crossing_parity(key, m)) ? -1.0 : 1.0;
    BasisKey new_key = key;
    Occupation& target = (m.party == Party::A) ? new_key.a_occ : new_key.b_occ;
    target = occ.with_count(m, n - 1);
    out.add_amplitude(new_key, amp * factor * sign);
  }
  out.apply_floor();
  return out;
}

FieldState filtered(const FieldState& s, const std::function<bool(const BasisKey&)>& pred) {
  FieldState out(s.partition(), s.statistics(), s.truncation());
  for (const auto& [key, amp] : s.amplitudes())
    if (pred(key)) out.add_amplitude(key, amp);
  return out;
}

FieldState sector_component(const FieldState& s, int n, int m) {
  return filtered(s, [n, m](const BasisKey& key) {
    return key.a_occ.total() == n && key.b_occ.total() == m;
  });
}

ProjectionResult project_fixed_numbers(const FieldState& s, int n, int m) {
  if (n < 0 || m < 0) throw StructuralError("sector quanta must be non-negative");
  FieldState component = sector_component(s, n, m);
  ProjectionResult result;
  result.weight = component.norm_squared();
  if (result.weight > 0.0) result.state = component.normalized();
  return result;
}

std::map<std::pair<int, int>, double> sector_weights(const FieldState& s) {
  std::map<std::pair<int, int>, double> weights;
  for (const auto& [key, amp] : s.amplitudes())
    weights[{key.a_occ.total(), key.b_occ.total()}] += std::norm(amp);
  return weights;
}

FieldState partial_overlap(const FieldState& s, const FieldState& v, Party side) {
  if (s.partition() != v.partition() || s.statistics() != v.statistics())
    throw StructuralError("partial overlap requires identical partition and statistics");
  if (!v.restricted_to(side))
    throw StructuralError("overlap vector is not restricted to the requested party");
  FieldState out(s.partition(), s.statistics(), s.truncation());
  for (const auto& [key, amp] : s.amplitudes()) {
    BasisKey v_key, w_key;
    if (side == Party::A) {
      v_key.a_occ = key.a_occ;
      w_key.b_occ = key.b_occ;
    } else {
      v_key.b_occ = key.b_occ;
      w_key.a_occ = key.a_occ;
    }
    auto it = v.amplitudes().find(v_key);
    if (it != v.amplitudes().end()) out.add_amplitude(w_key, std::conj(it->second) * amp);
  }
  return out;
}

FieldState tensor_restricted(const FieldState& a_side, const FieldState& b_side) {
  if (a_side.partition() != b_side.partition() || a_side.statistics() != b_side.statistics())
    throw StructuralError("tensor of one-party vectors requires a common partition");
  if (!a_side.restricted_to(Party::A) || !b_side.restricted_to(Party::B))
    throw StructuralError("tensor arguments must be restricted to opposite parties");
  FieldState out(a_side.partition(), a_side.statistics(), a_side.truncation());
  for (const auto& [ka, va] : a_side.amplitudes())
    for (const auto& [kb, vb] : b_side.amplitudes())
      out.add_amplitude(BasisKey{ka.a_occ, kb.b_occ}, va * vb);
  return out;
}

Complex overlap_with_product(const FieldState& s, const FieldState& f, const FieldState& g) {
  if (s.partition() != f.partition() || s.partition() != g.partition())
    throw StructuralError("overlap requires a common partition");
  if (!f.restricted_to(Party::A) || !g.restricted_to(Party::B))
    throw StructuralError("overlap factors must be restricted to A and B respectively");
  Complex sum{0.0, 0.0};
  for (const auto& [key, amp] : s.amplitudes()) {
    auto fa = f.amplitudes().find(BasisKey{key.a_occ, Occupation{}});
    if (fa == f.amplitudes().end()) continue;
    auto gb = g.amplitudes().find(BasisKey{Occupation{}, key.b_occ});
    if (gb == g.amplitudes().end()) continue;
    sum += std::conj(fa->second * gb->second) * amp;
  }
  return sum;
}

FieldState tensor_with_ancilla(const FieldState& s, const FieldState& anc) {
  const bool anc_on_a = anc.partition().b_modes().empty();
  const bool anc_on_b = anc.partition().a_modes().empty();
  if (anc_on_a == anc_on_b)
    throw StructuralError("ancilla must occupy fresh modes of exactly one party");
  if (s.statistics() != anc.statistics())
    throw StructuralError("ancilla statistics must match the state");
  ModePartition joint = merge_partitions(s.partition(), anc.partition());
  FieldState out(joint, s.statistics(), s.truncation());
  out.set_pruned_weight(s.pruned_weight() + anc.pruned_weight());
  for (const auto& [ks, vs] : s.amplitudes()) {
    for (const auto& [ka, va] : anc.amplitudes()) {
      BasisKey key{merge_disjoint(ks.a_occ, ka.a_occ), merge_disjoint(ks.b_occ, ka.b_occ)};
      out.add_amplitude(key, vs * va);
    }
  }
  out.apply_floor();
  return out;
}

}  // namespace fockbell
