#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fockbell/bell.hpp"
#include "fockbell/feasibility.hpp"
#include "fockbell/io.hpp"
#include "fockbell/schmidt.hpp"

namespace fockbell {

struct Tolerances {
  double rank_tol = 1e-10;
  double weight_tol = 1e-12;
};

// One settings source evaluated end to end on a state.
struct BellEvaluation {
  SettingAngles angles{};
  ChReport report{};
  double chsh_search_max = 0.0;  // meaningful for the numeric source only
};

// Bell certification bundle. The closed-form and numeric-search settings are
// always both evaluated so reports can surface when the closed-form value
// falls short of the search optimum.
struct BellAnalysis {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  BellEvaluation closed_form;
  BellEvaluation numeric;
  std::optional<BellEvaluation> explicit_choice;
  bool closed_form_suboptimal = false;  // numeric CH beats closed-form CH by > 1e-6
  SettingsChoice::Source used = SettingsChoice::Source::Numeric;

  const BellEvaluation& used_evaluation() const;
};

BellAnalysis analyze_bell(const FieldState& s, const SchmidtDecomposition& d,
                          const SettingsChoice& choice);

struct FeasibilityAnalysis {
  SectorTable table;
  bool sectors_all_separable = false;
  bool entangled_sector_exists = false;
  std::vector<SectorViolationReport> sector_reports;
};

// Sector-resolved analysis; `only_sector` restricts the per-sector violation
// reports to a single (n, m).
FeasibilityAnalysis analyze_feasibility(const FieldState& s, const SettingsChoice& choice,
                                        const Tolerances& tols,
                                        std::optional<std::pair<int, int>> only_sector = {});

Json settings_to_json(const SettingAngles& angles);
Json schmidt_report_json(const SchmidtDecomposition& d);
Json bell_report_json(const BellAnalysis& analysis);
Json feasibility_report_json(const FeasibilityAnalysis& analysis, const Tolerances& tols);
Json pipeline_report_json(const FieldState& s, const SettingsChoice& choice,
                          const Tolerances& tols);

// Throws ValidationError unless the state is normalized to 1e-8.
void require_normalized(const FieldState& s);

}  // namespace fockbell
