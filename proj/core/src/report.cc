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

#include "ppxai/report.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <tuple>
#include <sstream>

#include "ppxai/csv.h"

namespace ppxai {
namespace {

std::string Num(double v) { return std::isnan(v) ? std::string() : FormatDouble(v); }

double ParseNum(const std::string& cell) {
  if (cell.empty()) return kNotApplicable;
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw Error(ErrorCode::kIo, "bad number '" + cell + "' in report");
  }
  return v;
}

std::string JoinNums(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += '|';
    out += Num(values[i]);
  }
  return out;
}

std::vector<double> SplitNums(const std::string& cell) {
  std::vector<double> out;
  if (cell.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto bar = cell.find('|', start);
    out.push_back(ParseNum(cell.substr(start, bar == std::string::npos ? std::string::npos : bar - start)));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return out;
}

bool SameNum(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

bool SameNums(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!SameNum(a[i], b[i])) return false;
  }
  return true;
}

std::vector<std::string> RowFields(const CellResult& r) {
  return {r.key.dataset,
          std::string(ToString(r.key.stage)),
          r.key.variant,
          std::string(ToString(r.key.explainer)),
          r.key.attribute,
          r.ok ? "ok" : "failed",
          std::to_string(r.repetitions),
          Num(r.attack_success),
          Num(r.attack_f1),
          Num(r.attack_precision),
          Num(r.attack_recall),
          JoinNums(r.success_per_repetition),
          JoinNums(r.f1_per_repetition),
          Num(r.random_guess),
          Num(r.random_guess_uniform),
          Num(r.baseline_attack_success),
          Num(r.baseline_attack_f1),
          Num(r.faithfulness_correlation),
          Num(r.faithfulness_estimate),
          Num(r.sufficiency),
          r.faithfulness_flags,
          Num(r.train_accuracy),
          Num(r.test_accuracy),
          Num(r.epsilon),
          Num(r.noise_multiplier),
          Num(r.data_validity),
          Num(r.data_structure),
          r.error};
}

void SortByKey(std::vector<CellResult>& results) {
  std::stable_sort(results.begin(), results.end(),
                   [](const CellResult& a, const CellResult& b) { return a.key < b.key; });
}

nlohmann::json JsonNum(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

}  // namespace

std::string_view ToString(Stage stage) {
  switch (stage) {
    case Stage::kBaseline:
      return "baseline";
    case Stage::kPre:
      return "pre";
    case Stage::kIn:
      return "in";
    case Stage::kPost:
      return "post";
  }
  return "?";
}

Stage ParseStage(std::string_view text) {
  for (auto s : {Stage::kBaseline, Stage::kPre, Stage::kIn, Stage::kPost}) {
    if (text == ToString(s)) return s;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown stage '" + std::string(text) + "'");
}

std::string CellKey::ToString() const {
  return dataset + "/" + std::string(ppxai::ToString(stage)) + "/" + variant + "/" +
         std::string(ppxai::ToString(explainer)) + "/" + attribute;
}

bool SameReportRow(const CellResult& a, const CellResult& b) {
  return a.key == b.key && a.ok == b.ok && a.error == b.error && a.repetitions == b.repetitions &&
         SameNum(a.attack_success, b.attack_success) && SameNum(a.attack_f1, b.attack_f1) &&
         SameNum(a.attack_precision, b.attack_precision) && SameNum(a.attack_recall, b.attack_recall) &&
         SameNums(a.success_per_repetition, b.success_per_repetition) &&
         SameNums(a.f1_per_repetition, b.f1_per_repetition) && SameNum(a.random_guess, b.random_guess) &&
         SameNum(a.random_guess_uniform, b.random_guess_uniform) &&
         SameNum(a.baseline_attack_success, b.baseline_attack_success) &&
         SameNum(a.baseline_attack_f1, b.baseline_attack_f1) &&
         SameNum(a.faithfulness_correlation, b.faithfulness_correlation) &&
         SameNum(a.faithfulness_estimate, b.faithfulness_estimate) && SameNum(a.sufficiency, b.sufficiency) &&
         a.faithfulness_flags == b.faithfulness_flags && SameNum(a.train_accuracy, b.train_accuracy) &&
         SameNum(a.test_accuracy, b.test_accuracy) && SameNum(a.epsilon, b.epsilon) &&
         SameNum(a.noise_multiplier, b.noise_multiplier) && SameNum(a.data_validity, b.data_validity) &&
         SameNum(a.data_structure, b.data_structure);
}

std::vector<std::string> ReportColumns() {
  return {"dataset",
          "stage",
          "variant",
          "explainer",
          "attribute",
          "status",
          "repetitions",
          "attack_success",
          "attack_f1",
          "attack_precision",
          "attack_recall",
          "attack_success_per_repetition",
          "attack_f1_per_repetition",
          "random_guess",
          "random_guess_uniform",
          "baseline_attack_success",
          "baseline_attack_f1",
          "faithfulness_correlation",
          "faithfulness_estimate",
          "sufficiency",
          "faithfulness_flags",
          "train_accuracy",
          "test_accuracy",
          "epsilon",
          "noise_multiplier",
          "data_validity",
          "data_structure",
          "error"};
}

std::string ReportToCsv(std::vector<CellResult> results) {
  SortByKey(results);
  std::ostringstream out;
  csv::WriteRow(out, ReportColumns());
  for (const auto& r : results) csv::WriteRow(out, RowFields(r));
  return out.str();
}

std::vector<CellResult> ParseReportCsv(std::string_view text) {
  const csv::Table table = csv::Parse(text);
  if (table.header != ReportColumns()) throw Error(ErrorCode::kSchemaMismatch, "not a report.csv header");
  std::vector<CellResult> results;
  for (const auto& f : table.rows) {
    if (f.size() != table.header.size()) throw Error(ErrorCode::kIo, "ragged report row");
    CellResult r;
    r.key.dataset = f[0];
    r.key.stage = ParseStage(f[1]);
    r.key.variant = f[2];
    r.key.explainer = ParseExplainerMethod(f[3]);
    r.key.attribute = f[4];
    if (f[5] != "ok" && f[5] != "failed") throw Error(ErrorCode::kIo, "bad status '" + f[5] + "'");
    r.ok = f[5] == "ok";
    r.repetitions = static_cast<int>(ParseNum(f[6]));
    r.attack_success = ParseNum(f[7]);
    r.attack_f1 = ParseNum(f[8]);
    r.attack_precision = ParseNum(f[9]);
    r.attack_recall = ParseNum(f[10]);
    r.success_per_repetition = SplitNums(f[11]);
    r.f1_per_repetition = SplitNums(f[12]);
    r.random_guess = ParseNum(f[13]);
    r.random_guess_uniform = ParseNum(f[14]);
    r.baseline_attack_success = ParseNum(f[15]);
    r.baseline_attack_f1 = ParseNum(f[16]);
    r.faithfulness_correlation = ParseNum(f[17]);
    r.faithfulness_estimate = ParseNum(f[18]);
    r.sufficiency = ParseNum(f[19]);
    r.faithfulness_flags = f[20];
    r.train_accuracy = ParseNum(f[21]);
    r.test_accuracy = ParseNum(f[22]);
    r.epsilon = ParseNum(f[23]);
    r.noise_multiplier = ParseNum(f[24]);
    r.data_validity = ParseNum(f[25]);
    r.data_structure = ParseNum(f[26]);
    r.error = f[27];
    results.push_back(std::move(r));
  }
  return results;
}

std::string TimingsToCsv(std::vector<CellResult> results) {
  SortByKey(results);
  std::ostringstream out;
  csv::WriteRow(out, {"dataset", "stage", "variant", "explainer", "attribute", "train_seconds",
                      "explain_ms_per_record", "synth_ms_per_record", "noise_ms_per_record", "attack_seconds"});
  for (const auto& r : results) {
    csv::WriteRow(out, {r.key.dataset, std::string(ToString(r.key.stage)), r.key.variant,
                        std::string(ToString(r.key.explainer)), r.key.attribute, Num(r.timings.train_seconds),
                        Num(r.timings.explain_ms_per_record), Num(r.timings.synth_ms_per_record),
                        Num(r.timings.noise_ms_per_record), Num(r.timings.attack_seconds)});
  }
  return out.str();
}

nlohmann::json ReportToJson(std::vector<CellResult> results) {
  SortByKey(results);
  nlohmann::json rows = nlohmann::json::array();
  const auto columns = ReportColumns();
  for (const auto& r : results) {
    nlohmann::json row;
    const auto fields = RowFields(r);
    for (std::size_t i = 0; i < columns.size(); ++i) row[columns[i]] = fields[i];
    for (const char* name : {"attack_success", "attack_f1", "attack_precision", "attack_recall", "random_guess",
                             "random_guess_uniform", "baseline_attack_success", "baseline_attack_f1",
                             "faithfulness_correlation", "faithfulness_estimate", "sufficiency",
                             "train_accuracy", "test_accuracy", "epsilon", "noise_multiplier", "data_validity",
                             "data_structure"}) {
      const std::string& s = row[name].get_ref<const std::string&>();
      row[name] = s.empty() ? nlohmann::json(nullptr) : nlohmann::json(ParseNum(s));
    }
    row["repetitions"] = r.repetitions;
    row["attack_success_per_repetition"] = r.success_per_repetition;
    row["attack_f1_per_repetition"] = r.f1_per_repetition;
    row["timings"] = {{"train_seconds", JsonNum(r.timings.train_seconds)},
                      {"explain_ms_per_record", JsonNum(r.timings.explain_ms_per_record)},
                      {"synth_ms_per_record", JsonNum(r.timings.synth_ms_per_record)},
                      {"noise_ms_per_record", JsonNum(r.timings.noise_ms_per_record)},
                      {"attack_seconds", JsonNum(r.timings.attack_seconds)}};
    row["detail"] = r.detail;
    rows.push_back(std::move(row));
  }
  return {{"format", "ppxai-report"}, {"version", 1}, {"cells", rows}};
}

Summary Summarize(const std::vector<CellResult>& results) {
  std::map<std::tuple<std::string, ExplainerMethod, std::string>, const CellResult*> baselines;
  for (const auto& r : results) {
    if (r.key.stage == Stage::kBaseline && r.ok) baselines[{r.key.dataset, r.key.explainer, r.key.attribute}] = &r;
  }
  Summary summary;
  std::map<Stage, StageSummary> stages;
  for (const auto& r : results) {
    if (r.key.stage == Stage::kBaseline || !r.ok) continue;
    SummaryCell c;
    c.key = r.key;
    c.attack_success = r.attack_success;
    c.attack_f1 = r.attack_f1;
    const auto it = baselines.find({r.key.dataset, r.key.explainer, r.key.attribute});
    if (it != baselines.end()) {
      c.baseline_attack_success = it->second->attack_success;
      c.baseline_attack_f1 = it->second->attack_f1;
    } else if (!std::isnan(r.baseline_attack_success)) {
      c.baseline_attack_success = r.baseline_attack_success;
      c.baseline_attack_f1 = r.baseline_attack_f1;
    } else {
      throw Error(ErrorCode::kUndefined, "no baseline for " + r.key.ToString());
    }
    c.delta_attack_success = c.attack_success - c.baseline_attack_success;
    c.delta_attack_f1 = c.attack_f1 - c.baseline_attack_f1;
    c.mitigated = c.delta_attack_success < 0.0;
    c.random_guess = r.random_guess;
    c.random_guess_uniform = r.random_guess_uniform;
    StageSummary& s = stages[r.key.stage];
    s.stage = r.key.stage;
    ++s.cells;
    s.mitigated += c.mitigated;
    s.mean_delta_attack_success += c.delta_attack_success;
    s.mean_delta_attack_f1 += c.delta_attack_f1;
    summary.cells.push_back(c);
  }
  if (summary.cells.empty()) throw Error(ErrorCode::kUndefined, "no successful PET cells to summarize");
  std::sort(summary.cells.begin(), summary.cells.end(),
            [](const SummaryCell& a, const SummaryCell& b) { return a.key < b.key; });
  for (auto& [stage, s] : stages) {
    const auto n = static_cast<double>(s.cells);
    s.fraction_mitigated = static_cast<double>(s.mitigated) / n;
    s.mean_delta_attack_success /= n;
    s.mean_delta_attack_f1 /= n;
    summary.stages.push_back(s);
  }
  return summary;
}

std::string SummaryToCsv(const Summary& summary) {
  std::ostringstream out;
  csv::WriteRow(out, {"row_type", "stage", "dataset", "explainer", "attribute", "variant", "attack_success",
                      "attack_f1", "baseline_attack_success", "baseline_attack_f1", "delta_attack_success",
                      "delta_attack_f1", "mitigated", "random_guess", "random_guess_uniform", "cells",
                      "fraction_mitigated"});
  for (const auto& c : summary.cells) {
    csv::WriteRow(out, {"cell", std::string(ToString(c.key.stage)), c.key.dataset,
                        std::string(ToString(c.key.explainer)), c.key.attribute, c.key.variant,
                        Num(c.attack_success), Num(c.attack_f1), Num(c.baseline_attack_success),
                        Num(c.baseline_attack_f1), Num(c.delta_attack_success), Num(c.delta_attack_f1),
                        c.mitigated ? "1" : "0", Num(c.random_guess), Num(c.random_guess_uniform), "1",
                        c.mitigated ? "1" : "0"});
  }
  for (const auto& s : summary.stages) {
    csv::WriteRow(out, {"stage", std::string(ToString(s.stage)), "", "", "", "", "", "", "", "",
                        Num(s.mean_delta_attack_success), Num(s.mean_delta_attack_f1), std::to_string(s.mitigated),
                        "", "", std::to_string(s.cells), Num(s.fraction_mitigated)});
  }
  return out.str();
}

void EmitReport(const std::vector<CellResult>& results, const std::filesystem::path& dir) {
  Require(!results.empty(), "cannot emit an empty report");
  csv::WriteTextFile(dir / "report.csv", ReportToCsv(results));
  csv::WriteTextFile(dir / "report.json", ReportToJson(results).dump(2) + "\n");
  csv::WriteTextFile(dir / "timings.csv", TimingsToCsv(results));
  try {
    csv::WriteTextFile(dir / "summary.csv", SummaryToCsv(Summarize(results)));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUndefined) throw;
  }
}

}  // namespace ppxai
