// Copyright 2026 The ppxai Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Campaign results: one row per run key, emitted as CSV and JSON, plus the
// baseline-relative summary.

#ifndef PPXAI_REPORT_H_
#define PPXAI_REPORT_H_

#include <compare>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppxai/explanation.h"

namespace ppxai {

enum class Stage { kBaseline, kPre, kIn, kPost };

std::string_view ToString(Stage stage);
Stage ParseStage(std::string_view text);

struct CellKey {
  std::string dataset;
  Stage stage = Stage::kBaseline;
  std::string variant;
  ExplainerMethod explainer = ExplainerMethod::kIg;
  std::string attribute;

  std::string ToString() const;
  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

inline constexpr double kNotApplicable = std::numeric_limits<double>::quiet_NaN();

struct CellTimings {
  double train_seconds = kNotApplicable;
  double explain_ms_per_record = kNotApplicable;
  double synth_ms_per_record = kNotApplicable;
  double noise_ms_per_record = kNotApplicable;
  double attack_seconds = kNotApplicable;
};

struct CellResult {
  CellKey key;
  bool ok = false;
  std::string error;
  int repetitions = 0;
  double attack_success = kNotApplicable;
  double attack_f1 = kNotApplicable;
  double attack_precision = kNotApplicable;
  double attack_recall = kNotApplicable;
  std::vector<double> success_per_repetition;
  std::vector<double> f1_per_repetition;
  double random_guess = kNotApplicable;
  double random_guess_uniform = 0.5;
  double baseline_attack_success = kNotApplicable;
  double baseline_attack_f1 = kNotApplicable;
  double faithfulness_correlation = kNotApplicable;
  double faithfulness_estimate = kNotApplicable;
  double sufficiency = kNotApplicable;
  std::string faithfulness_flags;
  double train_accuracy = kNotApplicable;
  double test_accuracy = kNotApplicable;
  double epsilon = kNotApplicable;
  double noise_multiplier = kNotApplicable;
  double data_validity = kNotApplicable;
  double data_structure = kNotApplicable;
  // Not part of report.csv: wall-clock values differ between runs.
  CellTimings timings;
  nlohmann::json detail = nlohmann::json::object();
};

// Equality of every report.csv field, NaN equal to NaN.
bool SameReportRow(const CellResult& a, const CellResult& b);

std::vector<std::string> ReportColumns();
// Rows sorted by key.
std::string ReportToCsv(std::vector<CellResult> results);
std::vector<CellResult> ParseReportCsv(std::string_view text);
std::string TimingsToCsv(std::vector<CellResult> results);
nlohmann::json ReportToJson(std::vector<CellResult> results);

struct SummaryCell {
  CellKey key;
  double attack_success = 0.0;
  double attack_f1 = 0.0;
  double baseline_attack_success = 0.0;
  double baseline_attack_f1 = 0.0;
  double delta_attack_success = 0.0;
  double delta_attack_f1 = 0.0;
  bool mitigated = false;
  double random_guess = 0.0;
  double random_guess_uniform = 0.5;
};

struct StageSummary {
  Stage stage = Stage::kBaseline;
  std::size_t cells = 0;
  std::size_t mitigated = 0;
  double fraction_mitigated = 0.0;
  double mean_delta_attack_success = 0.0;
  double mean_delta_attack_f1 = 0.0;
};

struct Summary {
  std::vector<SummaryCell> cells;
  std::vector<StageSummary> stages;
};

// Compares every successful PET cell with its baseline: the baseline-stage
// row with the same dataset, explainer and attribute, or else the baseline
// values carried on the row itself. Throws Error(kUndefined) when a PET cell
// has no baseline or when no PET cell exists.
Summary Summarize(const std::vector<CellResult>& results);
std::string SummaryToCsv(const Summary& summary);

// Writes report.csv, report.json, timings.csv and, when a summary can be
// formed, summary.csv into `dir`.
void EmitReport(const std::vector<CellResult>& results, const std::filesystem::path& dir);

}  // namespace ppxai

#endif  // PPXAI_REPORT_H_
