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

#include "ppxai/attack.h"

#include <cmath>

namespace ppxai {
namespace {

AttackSplit BuildSplit(const ExplanationMatrix& expl, const TabularDataset& half, std::string_view attribute) {
  if (half.empty()) throw Error(ErrorCode::kInvalidArgument, "auxiliary half is empty");
  AttackSplit s;
  s.record_ids = half.record_ids;
  s.x = RowsFor(expl, s.record_ids);
  s.y = half.SensitiveLabels(attribute);
  return s;
}

}  // namespace

AttackDataset BuildAttackDataset(const ExplanationMatrix& expl, const SplitBundle& split,
                                 std::string_view attribute) {
  if (split.aux_attack_train.sensitive.count(std::string(attribute)) == 0) {
    throw Error(ErrorCode::kSchemaMismatch, "unknown sensitive attribute '" + std::string(attribute) + "'");
  }
  AttackDataset ads;
  ads.attribute = std::string(attribute);
  ads.train = BuildSplit(expl, split.aux_attack_train, attribute);
  ads.test = BuildSplit(expl, split.aux_attack_test, attribute);
  return ads;
}

void AttackModelSpec::Validate() const {
  Require(!hidden.empty(), "attack model needs at least one hidden layer");
  for (std::size_t w : hidden) Require(w >= 1, "attack hidden widths must be positive");
  Require(l2 >= 0.0, "attack l2 must be nonnegative");
  Require(max_epochs >= 1, "attack max_epochs must be at least 1");
  Require(tolerance >= 0.0, "attack tolerance must be nonnegative");
  Require(no_change_epochs >= 1, "attack no_change_epochs must be at least 1");
  Require(learning_rate > 0.0, "attack learning_rate must be positive");
  Require(batch_size >= 1, "attack batch_size must be positive");
}

nlohmann::json ToJson(const AttackModelSpec& spec) {
  return {{"hidden", spec.hidden},
          {"l2", spec.l2},
          {"max_epochs", spec.max_epochs},
          {"tolerance", spec.tolerance},
          {"no_change_epochs", spec.no_change_epochs},
          {"learning_rate", spec.learning_rate},
          {"batch_size", spec.batch_size},
          {"standardize", spec.standardize}};
}

AttackModelSpec AttackModelSpecFromJson(const nlohmann::json& j) {
  AttackModelSpec spec;
  try {
    spec.hidden = j.value("hidden", spec.hidden);
    spec.l2 = j.value("l2", spec.l2);
    spec.max_epochs = j.value("max_epochs", spec.max_epochs);
    spec.tolerance = j.value("tolerance", spec.tolerance);
    spec.no_change_epochs = j.value("no_change_epochs", spec.no_change_epochs);
    spec.learning_rate = j.value("learning_rate", spec.learning_rate);
    spec.batch_size = j.value("batch_size", spec.batch_size);
    spec.standardize = j.value("standardize", spec.standardize);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad attack config: ") + e.what());
  }
  spec.Validate();
  return spec;
}

Labels TrainedAttack::Predict(const Matrix& x) const {
  const Matrix z = (x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
  return PredictLabels(model, z);
}

TrainedAttack TrainAttack(const AttackDataset& ads, const AttackModelSpec& spec, std::uint64_t seed) {
  spec.Validate();
  const Matrix& x = ads.train.x;
  Require(x.rows() >= 1, "attack training set is empty");
  TrainedAttack out;
  const Eigen::Index d = x.cols();
  out.mean = Vector::Zero(d);
  out.scale = Vector::Ones(d);
  if (spec.standardize) {
    out.mean = x.colwise().mean().transpose();
    for (Eigen::Index c = 0; c < d; ++c) {
      const double sd = std::sqrt((x.col(c).array() - out.mean(c)).square().mean());
      if (sd > 0.0) out.scale(c) = sd;
    }
  }
  const Matrix z = (x.rowwise() - out.mean.transpose()).array().rowwise() / out.scale.transpose().array();

  TrainConfig cfg;
  cfg.epochs = spec.max_epochs;
  cfg.learning_rate = spec.learning_rate;
  cfg.batch_size = std::min<std::size_t>(spec.batch_size, static_cast<std::size_t>(x.rows()));
  cfg.l2 = spec.l2;
  cfg.early_stop_tolerance = spec.tolerance;
  cfg.no_change_epochs = spec.no_change_epochs;
  const MlpModel init = InitModel(static_cast<std::size_t>(d), ReluClassifier(spec.hidden), seed, WeightInit::kGlorot);
  TrainResult trained = Train(init, z, ads.train.y, cfg, DeriveSeed(seed, 1));
  out.model = std::move(trained.model);
  out.epochs = static_cast<int>(trained.loss_history.size());
  out.seconds = trained.seconds;
  return out;
}

AttackMetrics ComputeAttackMetrics(const ConfusionCounts& c) {
  Require(c.total() >= 1, "attack metrics need at least one record");
  AttackMetrics m;
  m.counts = c;
  const auto tp = static_cast<double>(c.tp);
  if (c.tp + c.fp == 0) {
    m.precision_undefined = true;
  } else {
    m.precision = tp / static_cast<double>(c.tp + c.fp);
  }
  if (c.tp + c.fn == 0) {
    m.recall_undefined = true;
  } else {
    m.recall = tp / static_cast<double>(c.tp + c.fn);
  }
  if (m.precision + m.recall > 0.0) m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  m.attack_success = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  return m;
}

AttackMetrics ComputeAttackMetrics(std::span<const int> predictions, std::span<const int> labels) {
  Require(predictions.size() == labels.size(), "predictions and labels differ in length");
  Require(!labels.empty(), "attack metrics need at least one record");
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool p = predictions[i] != 0;
    const bool y = labels[i] != 0;
    if (p && y) {
      ++c.tp;
    } else if (p) {
      ++c.fp;
    } else if (y) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  return ComputeAttackMetrics(c);
}

double RandomGuessBaseline(std::span<const int> labels) {
  Require(!labels.empty(), "random guess needs labels");
  std::size_t positive = 0;
  for (int y : labels) positive += y != 0;
  const double p = static_cast<double>(positive) / static_cast<double>(labels.size());
  return std::max(p, 1.0 - p);
}

AttackReport RunAttack(const AttackDataset& ads, const AttackModelSpec& spec,
                       std::span<const std::uint64_t> seeds) {
  Require(!seeds.empty(), "attack needs at least one repetition");
  Require(ads.test.x.rows() >= 1, "attack test set is empty");
  AttackReport report;
  report.attribute = ads.attribute;
  report.random_guess = RandomGuessBaseline(ads.test.y);
  for (std::uint64_t seed : seeds) {
    const TrainedAttack trained = TrainAttack(ads, spec, seed);
    AttackRun run;
    run.seed = seed;
    run.metrics = ComputeAttackMetrics(trained.Predict(ads.test.x), ads.test.y);
    run.epochs = trained.epochs;
    run.seconds = trained.seconds;
    report.any_undefined = report.any_undefined || run.metrics.precision_undefined || run.metrics.recall_undefined;
    report.runs.push_back(run);
  }
  const auto n = static_cast<double>(report.runs.size());
  for (const auto& r : report.runs) {
    report.precision += r.metrics.precision / n;
    report.recall += r.metrics.recall / n;
    report.f1 += r.metrics.f1 / n;
    report.attack_success += r.metrics.attack_success / n;
  }
  return report;
}

nlohmann::json ToJson(const AttackReport& report) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : report.runs) {
    runs.push_back({{"seed", r.seed},
                    {"tp", r.metrics.counts.tp},
                    {"fp", r.metrics.counts.fp},
                    {"fn", r.metrics.counts.fn},
                    {"tn", r.metrics.counts.tn},
                    {"precision", r.metrics.precision},
                    {"recall", r.metrics.recall},
                    {"f1", r.metrics.f1},
                    {"attack_success", r.metrics.attack_success},
                    {"precision_undefined", r.metrics.precision_undefined},
                    {"recall_undefined", r.metrics.recall_undefined},
                    {"epochs", r.epochs},
                    {"seconds", r.seconds}});
  }
  return {{"attribute", report.attribute},
          {"random_guess", report.random_guess},
          {"random_guess_uniform", report.random_guess_uniform},
          {"precision", report.precision},
          {"recall", report.recall},
          {"f1", report.f1},
          {"attack_success", report.attack_success},
          {"repetitions", report.runs.size()},
          {"runs", runs}};
}

}  // namespace ppxai
