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

// Attribute inference from explanations alone: the adversary trains an MLP
// that maps an explanation row to the record's sensitive attribute.

#ifndef PPXAI_ATTACK_H_
#define PPXAI_ATTACK_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppxai/explanation.h"
#include "ppxai/mlp.h"
#include "ppxai/tabular_data.h"

namespace ppxai {

struct AttackSplit {
  Matrix x;
  Labels y;
  std::vector<RecordId> record_ids;
};

struct AttackDataset {
  std::string attribute;
  AttackSplit train;
  AttackSplit test;
};

// Joins explanation rows to the auxiliary halves by record id.
AttackDataset BuildAttackDataset(const ExplanationMatrix& expl, const SplitBundle& split,
                                 std::string_view attribute);

struct AttackModelSpec {
  std::vector<std::size_t> hidden = {64, 128, 32};
  double l2 = 1e-3;
  int max_epochs = 500;
  double tolerance = 1e-4;
  int no_change_epochs = 10;
  double learning_rate = 1e-3;
  std::size_t batch_size = 200;
  // Inputs are z-scored with attack-train statistics.
  bool standardize = true;

  void Validate() const;
};

nlohmann::json ToJson(const AttackModelSpec& spec);
AttackModelSpec AttackModelSpecFromJson(const nlohmann::json& j);

struct TrainedAttack {
  MlpModel model;
  Vector mean;
  Vector scale;
  int epochs = 0;
  double seconds = 0.0;

  Labels Predict(const Matrix& x) const;
};

TrainedAttack TrainAttack(const AttackDataset& ads, const AttackModelSpec& spec, std::uint64_t seed);

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct AttackMetrics {
  ConfusionCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double attack_success = 0.0;
  bool precision_undefined = false;
  bool recall_undefined = false;
};

AttackMetrics ComputeAttackMetrics(const ConfusionCounts& counts);
AttackMetrics ComputeAttackMetrics(std::span<const int> predictions, std::span<const int> labels);

// Majority-class prior max(p, 1 - p).
double RandomGuessBaseline(std::span<const int> labels);

struct AttackRun {
  std::uint64_t seed = 0;
  AttackMetrics metrics;
  int epochs = 0;
  double seconds = 0.0;
};

struct AttackReport {
  std::string attribute;
  double random_guess = 0.0;
  double random_guess_uniform = 0.5;
  std::vector<AttackRun> runs;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double attack_success = 0.0;
  bool any_undefined = false;
};

// One training per seed; the report carries per-run values and their means.
AttackReport RunAttack(const AttackDataset& ads, const AttackModelSpec& spec,
                       std::span<const std::uint64_t> seeds);

nlohmann::json ToJson(const AttackReport& report);

}  // namespace ppxai

#endif  // PPXAI_ATTACK_H_
