#include "fockbell/feasibility.hpp"

#include <algorithm>
#include <cmath>

#include "fockbell/errors.hpp"

namespace fockbell {

SectorTable sector_table(const FieldState& s, double rank_tol, double weight_tol) {
  SectorTable table;
  table.rank_tolerance = rank_tol;
  table.weight_tolerance = weight_tol;
  for (const auto& [sector, weight] : sector_weights(s)) {
    SectorRecord record;
    record.n = sector.first;
    record.m = sector.second;
    record.weight = weight;
    ProjectionResult projection = project_fixed_numbers(s, record.n, record.m);
    record.rank = schmidt_rank(*projection.state, rank_tol);
    if (weight > weight_tol) record.projected = std::move(projection.state);
    table.records.push_back(std::move(record));
  }
  std::sort(table.records.begin(), table.records.end(),
            [](const SectorRecord& x, const SectorRecord& y) {
              return std::pair{x.n + x.m, x.n} < std::pair{y.n + y.m, y.n};
            });
  return table;
}

bool all_sectors_separable(const SectorTable& t) {
  return std::all_of(t.records.begin(), t.records.end(), [&](const SectorRecord& r) {
    return r.weight <= t.weight_tolerance || r.rank <= 1;
  });
}

bool has_entangled_sector(const SectorTable& t) { return !all_sectors_separable(t); }

double sector_blockwise_expectation(const FieldState& s, const LinearOperator& op) {
  double mixture = 0.0;
  for (const auto& [sector, weight] : sector_weights(s)) {
    const FieldState component = sector_component(s, sector.first, sector.second);
    const FieldState image = op(component);
    double off_weight = 0.0;
    for (const auto& [key, amp] : image.amplitudes())
      if (key.a_occ.total() != sector.first || key.b_occ.total() != sector.second)
        off_weight += std::norm(amp);
    if (off_weight > 1e-16 * component.norm_squared())
      throw StructuralError("operator mixes particle-number sectors");
    mixture += inner_product(component, image).real();
  }
  const double direct = inner_product(s, op(s)).real();
  if (std::abs(mixture - direct) > 1e-10 * std::max(1.0, std::abs(mixture)))
    throw NumericError("sector mixture disagrees with the direct expectation");
  return mixture;
}

LinearOperator sector_blocked(LinearOperator op) {
  return [op = std::move(op)](const FieldState& s) {
    FieldState out(s.partition(), s.statistics(), s.truncation());
    for (const auto& [sector, weight] : sector_weights(s)) {
      const FieldState component = sector_component(s, sector.first, sector.second);
      const FieldState blocked = sector_component(op(component), sector.first, sector.second);
      for (const auto& [key, amp] : blocked.amplitudes()) out.add_amplitude(key, amp);
    }
    return out;
  };
}

SectorViolationReport sector_violation_report(const FieldState& s, int n, int m,
                                              const SettingsChoice& choice, double rank_tol,
                                              double weight_tol) {
  SectorViolationReport report;
  report.n = n;
  report.m = m;

  const ProjectionResult projection = project_fixed_numbers(s, n, m);
  if (!projection.state) throw StructuralError("sector is empty");
  report.weight = projection.weight;

  report.mismatch_weight_a = filtered(s, [n, m](const BasisKey& key) {
                               return key.a_occ.total() == n && key.b_occ.total() != m;
                             }).norm_squared();
  report.mismatch_weight_b = filtered(s, [n, m](const BasisKey& key) {
                               return key.b_occ.total() == m && key.a_occ.total() != n;
                             }).norm_squared();

  const SchmidtDecomposition d = schmidt_decompose(*projection.state, rank_tol);
  report.rank = static_cast<int>(d.rank());
  if (report.rank < 2) {
    report.applicable = false;  // rank 1: no CH functional can be built on this sector
    return report;
  }
  report.applicable = true;

  const EffectiveQubitPair pair = effective_pair_from_schmidt(d);
  report.settings = resolve_settings(choice, pair);
  const ChReport projected = ch_probabilities(*projection.state, pair, report.settings);
  report.branch = projected.selected_branch;
  report.projected_ch = projected.selected_ch;

  const ChOperator op(pair, report.settings, report.branch);
  const BellOperatorDecomposition parts = decompose_ch_expectation(op, s, n, m);
  report.leakage_a = parts.leakage_a;
  report.leakage_b = parts.leakage_b;
  report.full_ch = report.weight * report.projected_ch - report.leakage_a - report.leakage_b;
  report.ns_condition_holds =
      report.leakage_a + report.leakage_b < report.weight * report.projected_ch;
  report.simple_sufficient_holds =
      report.mismatch_weight_a <= weight_tol && report.mismatch_weight_b <= weight_tol;
  return report;
}

bool has_isolated_entangled_sector(const FieldState& s, int n, int m, double weight_tol,
                                   double rank_tol) {
  const ProjectionResult projection = project_fixed_numbers(s, n, m);
  if (projection.weight <= weight_tol) return false;
  if (schmidt_rank(*projection.state, rank_tol) < 2) return false;
  const FieldState mismatched_a = filtered(s, [n, m](const BasisKey& key) {
    return key.a_occ.total() == n && key.b_occ.total() != m;
  });
  const FieldState mismatched_b = filtered(s, [n, m](const BasisKey& key) {
    return key.b_occ.total() == m && key.a_occ.total() != n;
  });
  return mismatched_a.norm_squared() <= weight_tol && mismatched_b.norm_squared() <= weight_tol;
}

}  // namespace fockbell
