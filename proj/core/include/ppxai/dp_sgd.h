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

#ifndef PPXAI_DP_SGD_H_
#define PPXAI_DP_SGD_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ppxai/common.h"
#include "ppxai/mlp.h"
#include "ppxai/tabular_data.h"

namespace ppxai {

struct DpConfig {
  double noise_multiplier = 1.0;
  double l2_clip = 1.0;
  std::size_t microbatch_size = 1;
  double delta = 1e-6;

  // noise_multiplier >= 0 (0 means non-private), l2_clip > 0, microbatch
  // size divides the batch size, delta in (0, 1).
  void Validate(std::size_t batch_size) const;
};

struct PrivacySpent {
  double epsilon = 0.0;
  double delta = 0.0;
  std::int64_t steps = 0;
  double sampling_rate = 0.0;
  double noise_multiplier = 0.0;
  double order = 0.0;
  // False when trained without noise; epsilon is then +infinity.
  bool is_private = true;
};

struct ClipAudit {
  std::int64_t steps_audited = 0;
  double max_norm_before_clip = 0.0;
  double max_norm_after_clip = 0.0;
  bool invariant_held = true;
};

struct DpTrainResult {
  MlpModel model;
  std::vector<double> loss_history;
  PrivacySpent privacy;
  ClipAudit audit;
  double seconds = 0.0;
  std::vector<std::string> warnings;
};

// Rescales `grad` to L2 norm `clip` when it exceeds it.
void ClipToNorm(Vector& grad, double clip);

// The privatized update direction for one batch: the batch is cut into
// microbatches, each microbatch-mean gradient is clipped to l2_clip, the
// clipped gradients are summed, N(0, (noise_multiplier * l2_clip)^2) noise is
// added per coordinate, and the sum is divided by the microbatch count.
Vector PrivatizedGradient(const MlpModel& model, const Matrix& x, std::span<const int> y,
                          const DpConfig& cfg, Rng& rng, ClipAudit* audit,
                          double* mean_loss = nullptr);

// DP-SGD with Adam updates. Batches come from a per-epoch shuffle; an
// incomplete trailing batch is dropped so that every step has the same
// sampling rate q = batch_size / N. Privacy is accounted with the RDP
// accountant treating batches as Poisson samples.
DpTrainResult DpTrain(const MlpModel& init, const Matrix& x, const Labels& y,
                      const TrainConfig& train_cfg, const DpConfig& dp_cfg, std::uint64_t seed);
DpTrainResult DpTrain(const MlpModel& init, const TabularDataset& ds, const TrainConfig& train_cfg,
                      const DpConfig& dp_cfg, std::uint64_t seed);

// Steps DpTrain performs for this dataset size and configuration.
std::int64_t DpSteps(std::size_t num_rows, const TrainConfig& train_cfg);

}  // namespace ppxai

#endif  // PPXAI_DP_SGD_H_
