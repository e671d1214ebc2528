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

#include <fstream>
#include <sstream>

#include "ppxai/csv.h"
#include "ppxai/experiment.h"
#include "test_util.h"

namespace ppxai {
namespace {

const std::filesystem::path kConfigs = std::filesystem::path(PPXAI_DATA_DIR) / "configs";

nlohmann::json SmokeJson() { return nlohmann::json::parse(csv::ReadTextFile(kConfigs / "smoke.json")); }

TEST(ExperimentConfigTest, FullScalePlanCounts) {
  const ExperimentConfig cfg = LoadExperimentConfig(kConfigs / "full_plan.json");
  ASSERT_EQ(cfg.datasets.size(), 4u);
  const CampaignPlan plan = PlanCampaign(cfg);
  EXPECT_EQ(plan.per_stage.at(Stage::kPre), 96u);
  EXPECT_EQ(plan.per_stage.at(Stage::kIn), 128u);
  EXPECT_EQ(plan.per_stage.at(Stage::kPost), 128u);
  EXPECT_EQ(plan.per_stage.at(Stage::kPre) + plan.per_stage.at(Stage::kIn) + plan.per_stage.at(Stage::kPost), 352u);
  EXPECT_FALSE(plan.per_stage.contains(Stage::kBaseline));
  EXPECT_EQ(plan.cells.size(), 352u);
  EXPECT_TRUE(std::is_sorted(plan.cells.begin(), plan.cells.end()));
}

TEST(ExperimentConfigTest, StageVariantNames) {
  const ExperimentConfig cfg = LoadExperimentConfig(kConfigs / "full_plan.json");
  EXPECT_EQ(StageVariants(cfg, Stage::kBaseline), std::vector<std::string>{"none"});
  EXPECT_EQ(StageVariants(cfg, Stage::kPre), (std::vector<std::string>{"copula", "ctgan", "tvae"}));
  EXPECT_EQ(StageVariants(cfg, Stage::kIn).size(), 4u);
  EXPECT_EQ(StageVariants(cfg, Stage::kPost).size(), 4u);
}

TEST(ExperimentConfigTest, RejectsInvalidConfigs) {
  const auto expect_invalid = [](nlohmann::json j) {
    return testing::ThrownCode([&] { ParseExperimentConfig(j, kConfigs); });
  };
  nlohmann::json j = SmokeJson();
  EXPECT_FALSE(expect_invalid(j).has_value());
  j["explainers"] = nlohmann::json::array();
  EXPECT_EQ(expect_invalid(j), ErrorCode::kInvalidArgument);
  j = SmokeJson();
  j["schema_version"] = 2;
  EXPECT_EQ(expect_invalid(j), ErrorCode::kUnsupported);
  j = SmokeJson();
  j["stages"] = {"baseline", "baseline"};
  EXPECT_EQ(expect_invalid(j), ErrorCode::kInvalidArgument);
  j = SmokeJson();
  j["in"] = {{"epsilon_targets", {1.0}}, {"noise_multipliers", {1.0}}};
  EXPECT_EQ(expect_invalid(j), ErrorCode::kInvalidArgument);
  j = SmokeJson();
  j["in"] = {{"epsilon_targets", {11.0}}};
  EXPECT_EQ(expect_invalid(j), ErrorCode::kInvalidArgument);
  j = SmokeJson();
  j["post"] = {{"variants", {"dp-cauchy"}}};
  EXPECT_EQ(expect_invalid(j), ErrorCode::kInvalidArgument);
  j = SmokeJson();
  j["repetitions"] = 0;
  EXPECT_EQ(expect_invalid(j), ErrorCode::kInvalidArgument);
  j = SmokeJson();
  j["datasets"].push_back(j["datasets"][0]);
  EXPECT_EQ(expect_invalid(j), ErrorCode::kInvalidArgument);
}

TEST(ExperimentConfigTest, DpProfiles) {
  EXPECT_EQ(DefaultDpProfile("adult").batch_size, 5u);
  EXPECT_EQ(DefaultDpProfile("credit").microbatch_size, 12u);
  EXPECT_EQ(DefaultDpProfile("compas").batch_size, 1u);
  EXPECT_DOUBLE_EQ(DefaultDpProfile("adult").learning_rate, 15e-5);
}

TEST(ExperimentTest, ConfiguredSubsampleIsDeterministic) {
  DatasetConfig d = ParseDatasetConfig(nlohmann::json{{"fixture", "adult"}, {"simulate_rows", 600}, {"max_rows", 200}},
                                       kConfigs);
  const TabularDataset a = LoadConfiguredDataset(d);
  const TabularDataset b = LoadConfiguredDataset(d);
  EXPECT_EQ(a.size(), 200u);
  EXPECT_EQ(a.record_ids, b.record_ids);
  EXPECT_TRUE(std::is_sorted(a.record_ids.begin(), a.record_ids.end()));
  const SplitBundle s = PrepareSplit(d);
  EXPECT_EQ(s.target_train.size() + s.aux_attack_train.size() + s.aux_attack_test.size(), 200u);
}

TEST(ExperimentTest, ConcatenateDatasets) {
  const auto& split = testing::FixtureSplit("credit", 300, 1);
  const TabularDataset all = Concatenate(split.aux_attack_train, split.aux_attack_test);
  EXPECT_EQ(all.size(), split.aux_attack_train.size() + split.aux_attack_test.size());
  EXPECT_EQ(all.SensitiveLabels("SEX").size(), all.size());
  TabularDataset other = split.aux_attack_test;
  other.feature_names[0] = "renamed";
  EXPECT_TRUE(testing::ThrownCode([&] { Concatenate(split.aux_attack_train, other); }).has_value());
}

TEST(ExperimentTest, CampaignIsByteReproducibleAndRecordsFailures) {
  nlohmann::json j = SmokeJson();
  j["pre"]["generators"] = {"copula", "ctgan"};
  const auto dir_a = testing::FreshTempDir("campaign_a");
  const auto dir_b = testing::FreshTempDir("campaign_b");
  j["output_dir"] = dir_a.string();
  const CampaignResult a = RunPipeline(ParseExperimentConfig(j, kConfigs));
  j["output_dir"] = dir_b.string();
  const CampaignResult b = RunPipeline(ParseExperimentConfig(j, kConfigs));
  const std::string report_a = csv::ReadTextFile(dir_a / "report.csv");
  EXPECT_EQ(report_a, csv::ReadTextFile(dir_b / "report.csv"));
  ASSERT_EQ(a.cells.size(), 2u * 5u);
  EXPECT_EQ(a.failed, 2u);
  for (const auto& c : a.cells) {
    if (c.key.variant == "ctgan") {
      EXPECT_FALSE(c.ok);
      EXPECT_FALSE(c.error.empty());
    } else {
      EXPECT_TRUE(c.ok) << c.key.ToString() << ": " << c.error;
      EXPECT_GE(c.attack_success, 0.0);
      EXPECT_LE(c.attack_success, 1.0);
    }
  }
  EXPECT_TRUE(std::filesystem::exists(dir_a / "summary.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir_a / "report.json"));
  EXPECT_TRUE(std::filesystem::exists(dir_a / "cells"));
  const auto parsed = ParseReportCsv(report_a);
  ASSERT_EQ(parsed.size(), a.cells.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) EXPECT_TRUE(SameReportRow(parsed[i], a.cells[i]));
}

}  // namespace
}  // namespace ppxai
