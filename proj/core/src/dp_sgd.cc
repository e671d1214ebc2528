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

#include "ppxai/dp_sgd.h"

#include <cassert>
#include <cmath>
#include <limits>

#include "ppxai/rdp_accountant.h"

namespace ppxai {

void DpConfig::Validate(std::size_t batch_size) const {
  Require(noise_multiplier >= 0.0 && std::isfinite(noise_multiplier),
          "noise multiplier must be finite and non-negative");
  Require(l2_clip > 0.0, "l2 clip must be positive");
  Require(microbatch_size >= 1, "microbatch size must be >= 1");
  Require(batch_size % microbatch_size == 0,
          "microbatch size " + std::to_string(microbatch_size) + " does not divide batch size " +
              std::to_string(batch_size));
  Require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
}

void ClipToNorm(Vector& grad, double clip) {
  const double norm = grad.norm();
  if (norm > clip) grad *= clip / norm;
}

Vector PrivatizedGradient(const MlpModel& model, const Matrix& x, std::span<const int> y,
                          const DpConfig& cfg, Rng& rng, ClipAudit* audit, double* mean_loss) {
  const auto rows = static_cast<std::size_t>(x.rows());
  Require(rows > 0 && rows % cfg.microbatch_size == 0, "batch not divisible into microbatches");
  const std::size_t micro = cfg.microbatch_size;
  const std::size_t count = rows / micro;

  Vector sum = Vector::Zero(static_cast<Eigen::Index>(model.num_parameters()));
  Vector grad;
  double loss = 0.0;
  double max_before = 0.0;
  double max_after = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const Matrix xm = x.middleRows(static_cast<Eigen::Index>(k * micro), static_cast<Eigen::Index>(micro));
    loss += model.Loss(xm, y.subspan(k * micro, micro), 0.0, &grad);
    max_before = std::max(max_before, grad.norm());
    ClipToNorm(grad, cfg.l2_clip);
    const double after = grad.norm();
    max_after = std::max(max_after, after);
    assert(after <= cfg.l2_clip * (1.0 + 1e-9));
    sum += grad;
  }
  if (cfg.noise_multiplier > 0.0) {
    std::normal_distribution<double> noise(0.0, cfg.noise_multiplier * cfg.l2_clip);
    for (Eigen::Index i = 0; i < sum.size(); ++i) sum(i) += noise(rng);
  }
  if (audit != nullptr) {
    ++audit->steps_audited;
    audit->max_norm_before_clip = std::max(audit->max_norm_before_clip, max_before);
    audit->max_norm_after_clip = std::max(audit->max_norm_after_clip, max_after);
    audit->invariant_held = audit->invariant_held && max_after <= cfg.l2_clip * (1.0 + 1e-9);
  }
  if (mean_loss != nullptr) *mean_loss = loss / static_cast<double>(count);
  return sum / static_cast<double>(count);
}

std::int64_t DpSteps(std::size_t num_rows, const TrainConfig& train_cfg) {
  return static_cast<std::int64_t>(train_cfg.epochs) *
         static_cast<std::int64_t>(num_rows / train_cfg.batch_size);
}

DpTrainResult DpTrain(const MlpModel& init, const Matrix& x, const Labels& y,
                      const TrainConfig& train_cfg, const DpConfig& dp_cfg, std::uint64_t seed) {
  Require(x.rows() > 0, "training set is empty");
  Require(static_cast<std::size_t>(x.rows()) == y.size(), "labels and rows disagree");
  const auto n = static_cast<std::size_t>(x.rows());
  train_cfg.Validate(n);
  dp_cfg.Validate(train_cfg.batch_size);

  Stopwatch timer;
  DpTrainResult result;
  result.model = init;
  if (dp_cfg.delta > 1.0 / static_cast<double>(n)) {
    result.warnings.push_back("delta " + FormatDouble(dp_cfg.delta) + " exceeds 1/N = " +
                              FormatDouble(1.0 / static_cast<double>(n)));
  }
  const std::size_t batch = train_cfg.batch_size;
  const std::size_t batches = n / batch;
  AdamOptimizer adam(train_cfg.learning_rate);
  Rng rng(seed);
  Matrix xb(static_cast<Eigen::Index>(batch), x.cols());
  Labels yb(batch);

  for (int epoch = 0; epoch < train_cfg.epochs; ++epoch) {
    const auto order = Permutation(n, rng);
    double total = 0.0;
    for (std::size_t b = 0; b < batches; ++b) {
      for (std::size_t i = 0; i < batch; ++i) {
        xb.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(order[b * batch + i]));
        yb[i] = y[order[b * batch + i]];
      }
      double loss = 0.0;
      const Vector grad = PrivatizedGradient(result.model, xb, yb, dp_cfg, rng, &result.audit, &loss);
      if (!std::isfinite(loss) || !grad.allFinite()) {
        throw Error(ErrorCode::kNumerical, "non-finite DP-SGD step at epoch " + std::to_string(epoch) +
                                               ", batch " + std::to_string(b));
      }
      total += loss;
      adam.Step(result.model.parameters(), grad);
    }
    result.loss_history.push_back(total / static_cast<double>(batches));
  }

  PrivacySpent& spent = result.privacy;
  spent.delta = dp_cfg.delta;
  spent.steps = static_cast<std::int64_t>(train_cfg.epochs) * static_cast<std::int64_t>(batches);
  spent.sampling_rate = static_cast<double>(batch) / static_cast<double>(n);
  spent.noise_multiplier = dp_cfg.noise_multiplier;
  if (dp_cfg.noise_multiplier > 0.0) {
    const auto bound = dp::ComputeEpsilon(spent.steps, spent.sampling_rate,
                                          dp_cfg.noise_multiplier, dp_cfg.delta);
    spent.epsilon = bound.epsilon;
    spent.order = bound.order;
  } else {
    spent.is_private = false;
    spent.epsilon = std::numeric_limits<double>::infinity();
    result.warnings.push_back("noise multiplier is 0: model trained without privacy");
  }
  result.seconds = timer.Seconds();
  return result;
}

DpTrainResult DpTrain(const MlpModel& init, const TabularDataset& ds, const TrainConfig& train_cfg,
                      const DpConfig& dp_cfg, std::uint64_t seed) {
  return DpTrain(init, ds.features, ds.target, train_cfg, dp_cfg, seed);
}

}  // namespace ppxai
