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
#include <limits>

#include "ppxai/dp_sgd.h"
#include "ppxai/experiment.h"
#include "ppxai/rdp_accountant.h"
#include "test_util.h"

namespace ppxai {
namespace {

struct Batch {
  Matrix x;
  Labels y;
};

Batch RandomBatch(std::size_t rows, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  Batch b{Matrix(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(d)), Labels(rows)};
  for (std::size_t r = 0; r < rows; ++r) {
    b.x.row(static_cast<Eigen::Index>(r)) = testing::RandomPoint(d, rng).transpose();
    b.y[r] = static_cast<int>(UniformIndex(rng, 2));
  }
  return b;
}

TEST(DpSgdTest, ClipToNormRescalesOnlyLargeGradients) {
  Vector g = Vector::Zero(4);
  g(0) = 6.0;
  g(1) = 8.0;
  ClipToNorm(g, 1.0);
  EXPECT_NEAR(g.norm(), 1.0, 1e-15);
  EXPECT_NEAR(g(0) / g(1), 0.75, 1e-15);
  Vector small = Vector::Constant(4, 0.1);
  const Vector keep = small;
  ClipToNorm(small, 1.0);
  EXPECT_EQ(small, keep);
}

TEST(DpSgdTest, SingleExampleGradientIsClippedToExactlyTheBound) {
  const MlpModel m = testing::LinearModel({5.0, 5.0, 5.0}, 0.0, Activation::kSigmoid);
  Batch b{Matrix(1, 3), Labels{0}};
  b.x << 0.2, 3.0, 1.0;
  Vector raw;
  m.Loss(b.x, b.y, 0.0, &raw);
  ASSERT_GT(raw.norm(), 1.0);
  DpConfig cfg;
  cfg.noise_multiplier = 0.0;
  cfg.l2_clip = 1.0;
  Rng rng(0);
  ClipAudit audit;
  const Vector g = PrivatizedGradient(m, b.x, b.y, cfg, rng, &audit);
  EXPECT_NEAR(g.norm(), 1.0, 1e-12);
  EXPECT_TRUE(audit.invariant_held);
  EXPECT_NEAR(audit.max_norm_before_clip, raw.norm(), 1e-12);
}

TEST(DpSgdTest, DegeneratesToNonPrivateGradient) {
  const MlpModel m = testing::RandomModel(5, {6}, 3);
  const Batch b = RandomBatch(12, 5, 4);
  Vector full;
  m.Loss(b.x, b.y, 0.0, &full);
  for (std::size_t micro : {1u, 3u, 12u}) {
    DpConfig cfg;
    cfg.noise_multiplier = 0.0;
    cfg.l2_clip = 1e12;
    cfg.microbatch_size = micro;
    Rng rng(0);
    const Vector g = PrivatizedGradient(m, b.x, b.y, cfg, rng, nullptr);
    EXPECT_TRUE(g.isApprox(full, 1e-12)) << micro;
  }
}

TEST(DpSgdTest, NoiseHasCalibratedStandardDeviation) {
  // Zero-weight model with clip far below the gradient norm: the clipped
  // sum is deterministic, so the spread is the added noise only.
  const MlpModel m = testing::LinearModel({0.0, 0.0}, 0.0, Activation::kSigmoid);
  const Batch b = RandomBatch(4, 2, 5);
  DpConfig cfg;
  cfg.noise_multiplier = 1.5;
  cfg.l2_clip = 0.01;
  cfg.microbatch_size = 1;
  DpConfig quiet = cfg;
  quiet.noise_multiplier = 0.0;
  Rng rng0(0);
  const Vector clean = PrivatizedGradient(m, b.x, b.y, quiet, rng0, nullptr);
  Rng rng(1);
  const int draws = 20000;
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (int t = 0; t < draws; ++t) {
    const Vector g = PrivatizedGradient(m, b.x, b.y, cfg, rng, nullptr) - clean;
    sum_sq += g.squaredNorm();
    count += static_cast<std::size_t>(g.size());
  }
  const double expected_sd = cfg.noise_multiplier * cfg.l2_clip / 4.0;
  EXPECT_NEAR(std::sqrt(sum_sq / static_cast<double>(count)), expected_sd, 0.01 * expected_sd);
}

TEST(DpSgdTest, ConfigValidation) {
  DpConfig cfg;
  cfg.microbatch_size = 5;
  EXPECT_EQ(testing::ThrownCode([&] { cfg.Validate(48); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(testing::ThrownCode([&] { cfg.Validate(5); }), std::nullopt);
  cfg.l2_clip = 0.0;
  EXPECT_EQ(testing::ThrownCode([&] { cfg.Validate(5); }), ErrorCode::kInvalidArgument);
}

TEST(DpSgdTest, TrainingAuditsEveryStepAndAccountsPrivacy) {
  const auto& split = testing::FixtureSplit("credit", 600, 2);
  const TabularDataset& train = split.target_train;
  TrainConfig tc;
  tc.epochs = 3;
  tc.batch_size = 48;
  tc.learning_rate = 1e-3;
  DpConfig cfg;
  cfg.noise_multiplier = 1.2;
  cfg.l2_clip = 1.0;
  cfg.microbatch_size = 12;
  const MlpModel init = InitModel(train.num_features(), ArchitectureProfile("default"), 0);
  const DpTrainResult r = DpTrain(init, train, tc, cfg, 5);
  EXPECT_EQ(r.audit.steps_audited, DpSteps(train.size(), tc));
  EXPECT_TRUE(r.audit.invariant_held);
  EXPECT_LE(r.audit.max_norm_after_clip, 1.0 + 1e-9);
  const double q = 48.0 / static_cast<double>(train.size());
  EXPECT_NEAR(r.privacy.sampling_rate, q, 1e-15);
  EXPECT_DOUBLE_EQ(r.privacy.epsilon, dp::ComputeEpsilon(r.audit.steps_audited, q, 1.2, 1e-6).epsilon);
  EXPECT_TRUE(r.privacy.is_private);
  const DpTrainResult again = DpTrain(init, train, tc, cfg, 5);
  EXPECT_EQ(again.model.parameters(), r.model.parameters());
}

TEST(DpSgdTest, ZeroNoiseIsFlaggedNonPrivate) {
  const auto& split = testing::FixtureSplit("credit", 300, 3);
  TrainConfig tc;
  tc.epochs = 1;
  DpConfig cfg;
  cfg.noise_multiplier = 0.0;
  const DpTrainResult r =
      DpTrain(InitModel(split.target_train.num_features(), ArchitectureProfile("default"), 0), split.target_train,
              tc, cfg, 0);
  EXPECT_FALSE(r.privacy.is_private);
  EXPECT_TRUE(std::isinf(r.privacy.epsilon));
  EXPECT_FALSE(r.warnings.empty());
}

TEST(DpSgdTest, StrongerPrivacyDoesNotImproveAccuracy) {
  const auto& split = testing::FixtureSplit("credit", 2000, 0);
  const DpTrainProfile profile = DefaultDpProfile("credit");
  TrainConfig tc;
  tc.epochs = profile.epochs;
  tc.learning_rate = profile.learning_rate;
  tc.batch_size = profile.batch_size;
  const std::size_t n = split.target_train.size();
  const std::int64_t steps = DpSteps(n, tc);
  const double q = static_cast<double>(tc.batch_size) / static_cast<double>(n);
  auto mean_accuracy = [&](double target) {
    DpConfig cfg;
    cfg.l2_clip = profile.l2_clip;
    cfg.microbatch_size = profile.microbatch_size;
    cfg.delta = profile.delta;
    cfg.noise_multiplier = dp::CalibrateNoise(target, steps, q, cfg.delta);
    double acc = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const MlpModel init = InitModel(split.target_train.num_features(), ArchitectureProfile("default"), seed);
      acc += Evaluate(DpTrain(init, split.target_train, tc, cfg, seed).model, split.aux_attack_test) / 5.0;
    }
    return acc;
  };
  EXPECT_LE(mean_accuracy(0.01), mean_accuracy(5.0));
}

}  // namespace
}  // namespace ppxai
