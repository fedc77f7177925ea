#include "fockbell/run.hpp"

#include <algorithm>
#include <cmath>

#include "fockbell/errors.hpp"

namespace fockbell {

const BellEvaluation& BellAnalysis::used_evaluation() const {
  switch (used) {
    case SettingsChoice::Source::ClosedForm: return closed_form;
    case SettingsChoice::Source::Numeric: return numeric;
    case SettingsChoice::Source::Explicit: return *explicit_choice;
  }
  throw StructuralError("unknown settings source");
}

void require_normalized(const FieldState& s) {
  if (std::abs(s.norm_squared() - 1.0) > 1e-8)
    throw ValidationError("input state is not normalized");
}

BellAnalysis analyze_bell(const FieldState& s, const SchmidtDecomposition& d,
                          const SettingsChoice& choice) {
  require_normalized(s);
  const EffectiveQubitPair pair = effective_pair_from_schmidt(d);

  BellAnalysis analysis;
  analysis.lambda1 = pair.lambda1;
  analysis.lambda2 = pair.lambda2;
  analysis.used = choice.source;

  analysis.closed_form.angles = gisin_settings(pair.lambda1, pair.lambda2);
  analysis.closed_form.report = ch_probabilities(s, pair, analysis.closed_form.angles);

  const SettingsSearchResult search = optimize_settings(pair);
  analysis.numeric.angles = search.angles;
  analysis.numeric.chsh_search_max = search.chsh_max;
  analysis.numeric.report = ch_probabilities(s, pair, search.angles);

  if (choice.source == SettingsChoice::Source::Explicit) {
    BellEvaluation explicit_eval;
    explicit_eval.angles = resolve_settings(choice, pair);
    explicit_eval.report = ch_probabilities(s, pair, explicit_eval.angles);
    analysis.explicit_choice = std::move(explicit_eval);
  }

  analysis.closed_form_suboptimal =
      analysis.numeric.report.selected_ch - analysis.closed_form.report.selected_ch > 1e-6;
  return analysis;
}

FeasibilityAnalysis analyze_feasibility(const FieldState& s, const SettingsChoice& choice,
                                        const Tolerances& tols,
                                        std::optional<std::pair<int, int>> only_sector) {
  require_normalized(s);
  FeasibilityAnalysis analysis;
  analysis.table = sector_table(s, tols.rank_tol, tols.weight_tol);
  analysis.sectors_all_separable = all_sectors_separable(analysis.table);
  analysis.entangled_sector_exists = has_entangled_sector(analysis.table);
  for (const SectorRecord& record : analysis.table.records) {
    if (record.weight <= tols.weight_tol) continue;
    if (only_sector && (record.n != only_sector->first || record.m != only_sector->second))
      continue;
    analysis.sector_reports.push_back(
        sector_violation_report(s, record.n, record.m, choice, tols.rank_tol, tols.weight_tol));
  }
  return analysis;
}

Json settings_to_json(const SettingAngles& angles) {
  Json j = Json::object();
  j.set("alpha", Json::number(angles.alpha));
  j.set("alpha_prime", Json::number(angles.alpha_prime));
  j.set("beta", Json::number(angles.beta));
  j.set("beta_prime", Json::number(angles.beta_prime));
  return j;
}

namespace {

Json restricted_vector_json(const FieldState& v, Party side) {
  Json amplitudes = Json::array();
  const auto& modes = v.partition().modes(side);
  for (const auto& [key, amp] : v.amplitudes()) {
    const Occupation& occ = side == Party::A ? key.a_occ : key.b_occ;
    Json entries = Json::array();
    for (const auto& [mode, count] : occ.entries()) {
      const auto it = std::lower_bound(modes.begin(), modes.end(), mode);
      Json pair = Json::array();
      pair.push(Json::integer(static_cast<long long>(it - modes.begin())));
      pair.push(Json::integer(count));
      entries.push(std::move(pair));
    }
    Json record = Json::object();
    record.set("occ", std::move(entries));
    record.set("re", Json::number(amp.real()));
    record.set("im", Json::number(amp.imag()));
    amplitudes.push(std::move(record));
  }
  Json j = Json::object();
  j.set("amplitudes", std::move(amplitudes));
  return j;
}

Json ch_report_json(const ChReport& report) {
  Json j = Json::object();
  Json probabilities = Json::object();
  for (const auto& [name, value] : report.probabilities)
    probabilities.set(name, Json::number(value));
  j.set("probabilities", std::move(probabilities));
  j.set("ch_branch1", Json::number(report.ch_branch1));
  j.set("ch_branch2", Json::number(report.ch_branch2));
  j.set("chsh_branch1", Json::number(report.chsh_branch1));
  j.set("chsh_branch2", Json::number(report.chsh_branch2));
  j.set("selected_branch", Json::integer(static_cast<int>(report.selected_branch)));
  j.set("selected_ch", Json::number(report.selected_ch));
  j.set("violation", Json::boolean(report.violation));
  Json c_matrix = Json::array();
  for (int k = 0; k < 2; ++k) {
    Json row = Json::array();
    for (int n = 0; n < 2; ++n) {
      Json entry = Json::object();
      entry.set("re", Json::number(report.effective_amplitudes[k][n].real()));
      entry.set("im", Json::number(report.effective_amplitudes[k][n].imag()));
      row.push(std::move(entry));
    }
    c_matrix.push(std::move(row));
  }
  j.set("effective_amplitudes", std::move(c_matrix));
  return j;
}

Json bell_evaluation_json(const BellEvaluation& eval, bool include_search_max) {
  Json j = Json::object();
  j.set("angles", settings_to_json(eval.angles));
  if (include_search_max) j.set("chsh_search_max", Json::number(eval.chsh_search_max));
  j.set("report", ch_report_json(eval.report));
  return j;
}

const char* source_name(SettingsChoice::Source source) {
  switch (source) {
    case SettingsChoice::Source::ClosedForm: return "gisin";
    case SettingsChoice::Source::Numeric: return "numeric";
    case SettingsChoice::Source::Explicit: return "explicit";
  }
  return "unknown";
}

Json sector_violation_json(const SectorViolationReport& report) {
  Json j = Json::object();
  j.set("n", Json::integer(report.n));
  j.set("m", Json::integer(report.m));
  j.set("weight", Json::number(report.weight));
  j.set("rank", Json::integer(report.rank));
  j.set("applicable", Json::boolean(report.applicable));
  if (report.applicable) {
    j.set("settings", settings_to_json(report.settings));
    j.set("branch", Json::integer(static_cast<int>(report.branch)));
    j.set("projected_ch", Json::number(report.projected_ch));
    j.set("mismatch_weight_a", Json::number(report.mismatch_weight_a));
    j.set("mismatch_weight_b", Json::number(report.mismatch_weight_b));
    j.set("leakage_a", Json::number(report.leakage_a));
    j.set("leakage_b", Json::number(report.leakage_b));
    j.set("full_ch", Json::number(report.full_ch));
  }
  j.set("ns_condition_holds", Json::boolean(report.ns_condition_holds));
  j.set("simple_sufficient_holds", Json::boolean(report.simple_sufficient_holds));
  return j;
}

}  // namespace

Json schmidt_report_json(const SchmidtDecomposition& d) {
  Json j = Json::object();
  j.set("format", Json::string("fockbell-schmidt-report"));
  j.set("version", Json::integer(1));
  j.set("rank", Json::integer(static_cast<long long>(d.rank())));
  j.set("rank_tolerance", Json::number(d.rank_tolerance));
  Json coefficients = Json::array();
  for (double c : d.coefficients) coefficients.push(Json::number(c));
  j.set("coefficients", std::move(coefficients));
  j.set("reconstruction_error", Json::number(d.reconstruction_error));
  j.set("discarded_weight", Json::number(d.discarded_weight));
  Json a_vectors = Json::array();
  for (const FieldState& v : d.a_vectors) a_vectors.push(restricted_vector_json(v, Party::A));
  j.set("a_vectors", std::move(a_vectors));
  Json b_vectors = Json::array();
  for (const FieldState& v : d.b_vectors) b_vectors.push(restricted_vector_json(v, Party::B));
  j.set("b_vectors", std::move(b_vectors));
  return j;
}

Json bell_report_json(const BellAnalysis& analysis) {
  Json j = Json::object();
  j.set("format", Json::string("fockbell-bell-report"));
  j.set("version", Json::integer(1));
  j.set("lambda1", Json::number(analysis.lambda1));
  j.set("lambda2", Json::number(analysis.lambda2));
  j.set("settings_used", Json::string(source_name(analysis.used)));
  j.set("closed_form", bell_evaluation_json(analysis.closed_form, false));
  j.set("numeric", bell_evaluation_json(analysis.numeric, true));
  if (analysis.explicit_choice)
    j.set("explicit", bell_evaluation_json(*analysis.explicit_choice, false));
  j.set("closed_form_suboptimal", Json::boolean(analysis.closed_form_suboptimal));
  j.set("ch_value", Json::number(analysis.used_evaluation().report.selected_ch));
  j.set("violation", Json::boolean(analysis.used_evaluation().report.violation));
  return j;
}

Json feasibility_report_json(const FeasibilityAnalysis& analysis, const Tolerances& tols) {
  Json j = Json::object();
  j.set("format", Json::string("fockbell-feasibility-report"));
  j.set("version", Json::integer(1));
  j.set("rank_tolerance", Json::number(tols.rank_tol));
  j.set("weight_tolerance", Json::number(tols.weight_tol));
  Json table = Json::array();
  for (const SectorRecord& record : analysis.table.records) {
    Json row = Json::object();
    row.set("n", Json::integer(record.n));
    row.set("m", Json::integer(record.m));
    row.set("weight", Json::number(record.weight));
    row.set("rank", Json::integer(record.rank));
    table.push(std::move(row));
  }
  j.set("sector_table", std::move(table));
  j.set("all_sectors_separable", Json::boolean(analysis.sectors_all_separable));
  j.set("has_entangled_sector", Json::boolean(analysis.entangled_sector_exists));
  Json reports = Json::array();
  for (const SectorViolationReport& report : analysis.sector_reports)
    reports.push(sector_violation_json(report));
  j.set("sector_reports", std::move(reports));
  return j;
}

Json pipeline_report_json(const FieldState& s, const SettingsChoice& choice,
                          const Tolerances& tols) {
  require_normalized(s);
  const SchmidtDecomposition d = schmidt_decompose(s, tols.rank_tol);
  const bool entangled = d.rank() >= 2;

  Json j = Json::object();
  j.set("format", Json::string("fockbell-pipeline-report"));
  j.set("version", Json::integer(1));

  std::optional<BellAnalysis> bell;
  if (entangled) bell = analyze_bell(s, d, choice);
  const FeasibilityAnalysis feasibility = analyze_feasibility(s, choice, tols);

  Json verdict = Json::object();
  verdict.set("entangled", Json::boolean(entangled));
  if (bell) {
    verdict.set("ch_value", Json::number(bell->used_evaluation().report.selected_ch));
    verdict.set("violation", Json::boolean(bell->used_evaluation().report.violation));
  } else {
    verdict.set("ch_value", Json());
    verdict.set("violation", Json::boolean(false));
  }
  verdict.set("all_sectors_separable", Json::boolean(feasibility.sectors_all_separable));
  verdict.set("has_entangled_sector", Json::boolean(feasibility.entangled_sector_exists));
  Json sector_conditions = Json::array();
  for (const SectorViolationReport& report : feasibility.sector_reports) {
    Json row = Json::object();
    row.set("n", Json::integer(report.n));
    row.set("m", Json::integer(report.m));
    row.set("ns_condition_holds", Json::boolean(report.ns_condition_holds));
    row.set("simple_sufficient_holds", Json::boolean(report.simple_sufficient_holds));
    sector_conditions.push(std::move(row));
  }
  verdict.set("sector_conditions", std::move(sector_conditions));
  j.set("verdict", std::move(verdict));

  j.set("schmidt", schmidt_report_json(d));
  if (bell) j.set("bell", bell_report_json(*bell));
  j.set("feasibility", feasibility_report_json(feasibility, tols));
  return j;
}

}  // namespace fockbell
