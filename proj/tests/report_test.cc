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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "ppxai/csv.h"
#include "ppxai/report.h"
#include "test_util.h"

namespace ppxai {
namespace {

CellResult Cell(Stage stage, std::string variant, double success, double f1) {
  CellResult r;
  r.key = {"adult", stage, std::move(variant), ExplainerMethod::kIg, "sex"};
  r.ok = true;
  r.repetitions = 2;
  r.attack_success = success;
  r.attack_f1 = f1;
  r.attack_precision = 0.5;
  r.attack_recall = 0.25;
  r.success_per_repetition = {success - 0.01, success + 0.01};
  r.f1_per_repetition = {f1, f1};
  r.random_guess = 0.6;
  r.faithfulness_correlation = 0.1 / 3.0;
  r.faithfulness_flags = "correlation_undefined=0";
  r.test_accuracy = 0.85;
  return r;
}

TEST(ReportTest, CellKeyString) {
  const CellKey k{"adult", Stage::kPost, "dp-gaussian", ExplainerMethod::kShap, "sex"};
  EXPECT_EQ(k.ToString(), "adult/post/dp-gaussian/SHAP/sex");
  EXPECT_EQ(ParseStage("in"), Stage::kIn);
  EXPECT_EQ(testing::ThrownCode([] { ParseStage("during"); }), ErrorCode::kInvalidArgument);
}

TEST(ReportTest, CsvRoundTripPreservesRows) {
  std::vector<CellResult> cells = {Cell(Stage::kBaseline, "none", 0.8, 0.7), Cell(Stage::kIn, "eps=1", 0.6, 0.4)};
  CellResult failed;
  failed.key = {"adult", Stage::kPre, "ctgan", ExplainerMethod::kIg, "sex"};
  failed.error = "unsupported, with \"quotes\"";
  cells.push_back(failed);
  const std::string csv = ReportToCsv(cells);
  const auto back = ParseReportCsv(csv);
  ASSERT_EQ(back.size(), 3u);
  for (const auto& c : back) {
    const auto it = std::find_if(cells.begin(), cells.end(), [&](const CellResult& o) { return o.key == c.key; });
    ASSERT_NE(it, cells.end());
    EXPECT_TRUE(SameReportRow(*it, c)) << c.key.ToString();
  }
  EXPECT_EQ(ReportToCsv(back), csv);
  EXPECT_TRUE(std::isnan(back[0].epsilon) || back[0].key.stage == Stage::kIn);
}

TEST(ReportTest, OutputIsSortedByKey) {
  const std::vector<CellResult> a = {Cell(Stage::kIn, "eps=1", 0.6, 0.4), Cell(Stage::kBaseline, "none", 0.8, 0.7)};
  const std::vector<CellResult> b = {a[1], a[0]};
  EXPECT_EQ(ReportToCsv(a), ReportToCsv(b));
  EXPECT_EQ(ReportToJson(a).dump(), ReportToJson(b).dump());
}

TEST(SummaryTest, MitigationAndDeltas) {
  const std::vector<CellResult> cells = {Cell(Stage::kBaseline, "none", 0.8, 0.7), Cell(Stage::kIn, "eps=1", 0.6, 0.4),
                                         Cell(Stage::kIn, "eps=5", 0.85, 0.75), Cell(Stage::kPost, "dp-laplace", 0.8, 0.7)};
  const Summary s = Summarize(cells);
  ASSERT_EQ(s.cells.size(), 3u);
  const SummaryCell& eps1 = s.cells[0];
  EXPECT_EQ(eps1.key.variant, "eps=1");
  EXPECT_NEAR(eps1.delta_attack_success, -0.2, 1e-12);
  EXPECT_NEAR(eps1.delta_attack_f1, -0.3, 1e-12);
  EXPECT_TRUE(eps1.mitigated);
  EXPECT_FALSE(s.cells[1].mitigated);
  EXPECT_EQ(s.cells[2].delta_attack_success, 0.0);
  EXPECT_FALSE(s.cells[2].mitigated);
  ASSERT_EQ(s.stages.size(), 2u);
  EXPECT_EQ(s.stages[0].stage, Stage::kIn);
  EXPECT_EQ(s.stages[0].cells, 2u);
  EXPECT_DOUBLE_EQ(s.stages[0].fraction_mitigated, 0.5);
  EXPECT_NEAR(s.stages[0].mean_delta_attack_success, (-0.2 + 0.05) / 2, 1e-12);
  EXPECT_EQ(s.stages[1].mitigated, 0u);
}

TEST(SummaryTest, MissingBaselineIsUndefined) {
  const std::vector<CellResult> cells = {Cell(Stage::kIn, "eps=1", 0.6, 0.4)};
  EXPECT_EQ(testing::ThrownCode([&] { Summarize(cells); }), ErrorCode::kUndefined);
  std::vector<CellResult> attached = cells;
  attached[0].baseline_attack_success = 0.9;
  attached[0].baseline_attack_f1 = 0.8;
  EXPECT_NEAR(Summarize(attached).cells[0].delta_attack_success, -0.3, 1e-12);
}

TEST(SummaryTest, EmitReportWritesFiles) {
  const auto dir = testing::FreshTempDir("emit");
  const std::vector<CellResult> cells = {Cell(Stage::kBaseline, "none", 0.8, 0.7), Cell(Stage::kIn, "eps=1", 0.6, 0.4)};
  EmitReport(cells, dir);
  for (const char* f : {"report.csv", "report.json", "timings.csv", "summary.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  EXPECT_EQ(csv::ReadTextFile(dir / "report.csv"), ReportToCsv(cells));
  const auto json = nlohmann::json::parse(csv::ReadTextFile(dir / "report.json"));
  EXPECT_TRUE(json.is_object() || json.is_array());
  const auto summary = csv::Parse(csv::ReadTextFile(dir / "summary.csv"));
  EXPECT_GE(summary.rows.size(), 1u);
  const auto only_baseline_dir = testing::FreshTempDir("emit_baseline");
  EmitReport({cells[0]}, only_baseline_dir);
  EXPECT_FALSE(std::filesystem::exists(only_baseline_dir / "summary.csv"));
  EXPECT_EQ(testing::ThrownCode([&] { EmitReport({}, dir); }), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace ppxai
