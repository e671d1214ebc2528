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

// Faithfulness of attributions: correlation, estimate and sufficiency.
// "Removing" a feature sets it to the configured baseline value.

#ifndef PPXAI_XAI_METRICS_H_
#define PPXAI_XAI_METRICS_H_

#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppxai/explanation.h"
#include "ppxai/mlp.h"
#include "ppxai/tabular_data.h"

namespace ppxai {

struct FaithfulnessConfig {
  int subset_size = 3;
  int iterations = 100;
  double baseline_value = 0.0;
  double similarity_threshold = 0.1;
  int sample_size = 200;
  std::uint64_t seed = 0;

  void Validate(std::size_t num_features) const;
};

nlohmann::json ToJson(const FaithfulnessConfig& cfg);
FaithfulnessConfig FaithfulnessConfigFromJson(const nlohmann::json& j);

// Undefined values are reported as 0 with the flag set.
struct MetricValue {
  double value = 0.0;
  bool undefined = false;
};

MetricValue FaithfulnessCorrelation(const MlpModel& model, std::span<const double> x,
                                    std::span<const double> attr, const FaithfulnessConfig& cfg,
                                    std::uint64_t seed);

MetricValue FaithfulnessEstimate(const MlpModel& model, std::span<const double> x,
                                 std::span<const double> attr, const FaithfulnessConfig& cfg);

// Rows of `expl` whose relative L2 distance is within the threshold,
// dist(a, b) <= threshold * max(|a|, |b|), are neighbors. A record's own row
// counts toward its neighborhood; records without another neighbor are skipped.
MetricValue Sufficiency(const Matrix& expl, std::span<const int> predictions, const FaithfulnessConfig& cfg);

struct FaithfulnessReport {
  double correlation = 0.0;
  double estimate = 0.0;
  double sufficiency = 0.0;
  std::vector<RecordId> record_ids;
  std::vector<double> correlation_per_record;
  std::vector<double> estimate_per_record;
  std::size_t correlation_undefined = 0;
  std::size_t estimate_undefined = 0;
  bool sufficiency_undefined = false;
};

// Evaluates a seeded sample of `cfg.sample_size` records of `ds` (all of
// them when fewer); the sample depends only on ds and cfg.seed.
FaithfulnessReport EvaluateFaithfulness(const MlpModel& model, const TabularDataset& ds,
                                        const ExplanationMatrix& expl, const FaithfulnessConfig& cfg);

nlohmann::json ToJson(const FaithfulnessReport& report);

}  // namespace ppxai

#endif  // PPXAI_XAI_METRICS_H_
