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

// Audit campaigns: configuration, cell planning and the end-to-end pipeline
// (baseline, synthetic-data, DP-training and explanation-noise stages).

#ifndef PPXAI_EXPERIMENT_H_
#define PPXAI_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppxai/attack.h"
#include "ppxai/explainers.h"
#include "ppxai/mlp.h"
#include "ppxai/noise_defense.h"
#include "ppxai/report.h"
#include "ppxai/tabular_data.h"
#include "ppxai/xai_metrics.h"

namespace ppxai {

inline constexpr int kConfigSchemaVersion = 1;

struct DpTrainProfile {
  double learning_rate = 15e-5;
  std::size_t batch_size = 48;
  std::size_t microbatch_size = 1;
  double l2_clip = 1.0;
  double delta = 1e-6;
  int epochs = 50;
};

// Tuned values for the three bundled dataset families; other names get the
// struct defaults.
DpTrainProfile DefaultDpProfile(std::string_view fixture);

struct DatasetConfig {
  std::string name;
  // Optional: "adult", "credit" or "compas" supplies the schema and, when
  // `path` is empty, simulated rows.
  std::string fixture;
  std::filesystem::path path;
  std::size_t simulate_rows = 2000;
  std::uint64_t simulate_seed = 0;
  DatasetSchema schema;
  std::vector<SensitiveSpec> sensitive;
  std::size_t max_rows = 0;  // 0 keeps every row
  std::uint64_t split_seed = 0;
  std::string architecture = "default";
  DpTrainProfile dp;
};

struct ExperimentConfig {
  std::vector<DatasetConfig> datasets;
  std::vector<Stage> stages;
  std::vector<ExplainerMethod> explainers;
  TrainConfig train;
  std::vector<std::string> generators = {"copula"};
  std::vector<double> epsilon_targets;
  std::vector<double> noise_multipliers;
  std::vector<NoiseSpec> noise_variants;
  ExplainerConfig explainer;
  AttackModelSpec attack;
  FaithfulnessConfig faithfulness;
  bool faithfulness_enabled = true;
  int repetitions = 5;
  std::uint64_t campaign_seed = 0;
  std::filesystem::path output_dir;

  void Validate() const;
};

// Relative paths inside `j` resolve against `base_dir`.
ExperimentConfig ParseExperimentConfig(const nlohmann::json& j, const std::filesystem::path& base_dir);
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);
DatasetConfig ParseDatasetConfig(const nlohmann::json& j, const std::filesystem::path& base_dir);

// Variant labels of a stage: "none", generator names, "eps=<x>" / "nm=<x>",
// or noise variant names.
std::vector<std::string> StageVariants(const ExperimentConfig& cfg, Stage stage);

struct CampaignPlan {
  std::vector<CellKey> cells;  // sorted
  std::map<Stage, std::size_t> per_stage;
};

// The declared cross-product: datasets x variants x explainers x attributes
// for every configured stage.
CampaignPlan PlanCampaign(const ExperimentConfig& cfg);

// Load (or simulate), preprocess and optionally subsample.
TabularDataset LoadConfiguredDataset(const DatasetConfig& cfg);
SplitBundle PrepareSplit(const DatasetConfig& cfg);

// Rows of `a` followed by rows of `b`; the encodings must agree.
TabularDataset Concatenate(const TabularDataset& a, const TabularDataset& b);

struct CampaignResult {
  std::vector<CellResult> cells;  // one per planned cell, sorted by key
  std::size_t failed = 0;
};

// Runs every planned cell. A failing cell is recorded with its error and the
// rest proceed. When cfg.output_dir is set, per-cell sidecars go to
// <output_dir>/cells and the reports to <output_dir>.
CampaignResult RunPipeline(const ExperimentConfig& cfg, std::ostream* log = nullptr);

}  // namespace ppxai

#endif  // PPXAI_EXPERIMENT_H_
