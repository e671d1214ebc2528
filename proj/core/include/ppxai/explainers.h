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

// Feature attribution of the model's positive-class output.

#ifndef PPXAI_EXPLAINERS_H_
#define PPXAI_EXPLAINERS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppxai/explanation.h"
#include "ppxai/mlp.h"
#include "ppxai/tabular_data.h"

namespace ppxai {

inline constexpr int kExactCoalitions = 0;

struct ExplainerConfig {
  int ig_steps = 64;
  std::vector<double> ig_baseline;  // empty means all zeros
  bool ig_midpoint = true;          // false: left Riemann sum
  int sg_samples = 25;
  double sg_sigma = 0.1;  // scaled units; every feature spans [0, 1]
  int shap_background_size = 100;
  int shap_coalitions = 512;  // kExactCoalitions enumerates all 2^d
  int lime_samples = 1000;
  double lime_kernel_width = 0.0;  // 0 means 0.75 * sqrt(d)
  int lime_top_k = 0;              // 0 means d
  double lime_ridge = 1.0;

  void Validate() const;
  std::string Digest(ExplainerMethod method) const;
};

nlohmann::json ToJson(const ExplainerConfig& cfg);
ExplainerConfig ExplainerConfigFromJson(const nlohmann::json& j);

// Training-side information the sampling explainers need.
struct ExplainerContext {
  Matrix background;                // SHAP reference rows
  std::vector<FeatureGroup> groups;  // LIME perturbation units
  Vector feature_std;               // LIME continuous perturbation std
  std::vector<std::vector<double>> category_frequencies;  // per group

  // Every column continuous, std taken from `rows` (1 where constant).
  static ExplainerContext FromMatrix(const Matrix& rows);
};

// Background: `cfg.shap_background_size` training rows drawn with `seed`.
ExplainerContext MakeContext(const TabularDataset& train, const ExplainerConfig& cfg, std::uint64_t seed);

Vector ExplainIg(const MlpModel& model, std::span<const double> x, const ExplainerConfig& cfg);
Vector ExplainSg(const MlpModel& model, std::span<const double> x, const ExplainerConfig& cfg,
                 std::uint64_t seed);
Vector ExplainShap(const MlpModel& model, std::span<const double> x, const ExplainerConfig& cfg,
                   const ExplainerContext& ctx, std::uint64_t seed);

struct LimeResult {
  Vector coefficients;
  double intercept = 0.0;
  double condition_number = 0.0;
};
LimeResult ExplainLimeDetailed(const MlpModel& model, std::span<const double> x, const ExplainerConfig& cfg,
                               const ExplainerContext& ctx, std::uint64_t seed);
Vector ExplainLime(const MlpModel& model, std::span<const double> x, const ExplainerConfig& cfg,
                   const ExplainerContext& ctx, std::uint64_t seed);

Vector Explain(ExplainerMethod method, const MlpModel& model, std::span<const double> x,
               const ExplainerConfig& cfg, const ExplainerContext& ctx, std::uint64_t seed);

// Rows in dataset order; record r uses seed DeriveSeed(base_seed, record id).
// Metadata records "seconds" and "ms_per_record".
ExplanationMatrix ExplainDataset(ExplainerMethod method, const MlpModel& model, const TabularDataset& ds,
                                 const ExplainerConfig& cfg, const ExplainerContext& ctx,
                                 std::uint64_t base_seed);

}  // namespace ppxai

#endif  // PPXAI_EXPLAINERS_H_
