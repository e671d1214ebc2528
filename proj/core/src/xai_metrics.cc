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

#include "ppxai/xai_metrics.h"

#include <algorithm>
#include <cmath>

#include "ppxai/stats.h"

namespace ppxai {
namespace {

MetricValue SafePearson(std::span<const double> a, std::span<const double> b) {
  try {
    return {stats::Pearson(a, b), false};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUndefined) throw;
    return {0.0, true};
  }
}

}  // namespace

void FaithfulnessConfig::Validate(std::size_t num_features) const {
  Require(subset_size >= 1 && static_cast<std::size_t>(subset_size) < num_features,
          "subset_size must satisfy 1 <= subset_size < d");
  Require(iterations >= 2, "iterations must be at least 2");
  Require(similarity_threshold >= 0.0, "similarity_threshold must be nonnegative");
  Require(sample_size >= 1, "sample_size must be at least 1");
}

nlohmann::json ToJson(const FaithfulnessConfig& cfg) {
  return {{"subset_size", cfg.subset_size},
          {"iterations", cfg.iterations},
          {"baseline_value", cfg.baseline_value},
          {"similarity_threshold", cfg.similarity_threshold},
          {"sample_size", cfg.sample_size},
          {"seed", cfg.seed}};
}

FaithfulnessConfig FaithfulnessConfigFromJson(const nlohmann::json& j) {
  FaithfulnessConfig cfg;
  try {
    cfg.subset_size = j.value("subset_size", cfg.subset_size);
    cfg.iterations = j.value("iterations", cfg.iterations);
    cfg.baseline_value = j.value("baseline_value", cfg.baseline_value);
    cfg.similarity_threshold = j.value("similarity_threshold", cfg.similarity_threshold);
    cfg.sample_size = j.value("sample_size", cfg.sample_size);
    cfg.seed = j.value("seed", cfg.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad faithfulness config: ") + e.what());
  }
  return cfg;
}

MetricValue FaithfulnessCorrelation(const MlpModel& model, std::span<const double> x,
                                    std::span<const double> attr, const FaithfulnessConfig& cfg,
                                    std::uint64_t seed) {
  const std::size_t d = x.size();
  Require(attr.size() == d, "attribution length must match the input");
  cfg.Validate(d);
  Rng rng(seed);
  const auto k = static_cast<std::size_t>(cfg.subset_size);
  Matrix perturbed(cfg.iterations, static_cast<Eigen::Index>(d));
  std::vector<double> u(static_cast<std::size_t>(cfg.iterations), 0.0);
  std::vector<std::size_t> order(d);
  for (int it = 0; it < cfg.iterations; ++it) {
    for (std::size_t i = 0; i < d; ++i) order[i] = i;
    for (std::size_t i = 0; i < k; ++i) std::swap(order[i], order[i + UniformIndex(rng, d - i)]);
    auto row = perturbed.row(it);
    for (std::size_t i = 0; i < d; ++i) row(static_cast<Eigen::Index>(i)) = x[i];
    for (std::size_t i = 0; i < k; ++i) {
      row(static_cast<Eigen::Index>(order[i])) = cfg.baseline_value;
      u[static_cast<std::size_t>(it)] += attr[order[i]];
    }
  }
  const double fx = model.Predict(x);
  const Vector out = model.Predict(perturbed);
  std::vector<double> v(u.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fx - out(static_cast<Eigen::Index>(i));
  return SafePearson(u, v);
}

MetricValue FaithfulnessEstimate(const MlpModel& model, std::span<const double> x,
                                 std::span<const double> attr, const FaithfulnessConfig& cfg) {
  const std::size_t d = x.size();
  Require(d >= 2, "faithfulness estimate needs at least two features");
  Require(attr.size() == d, "attribution length must match the input");
  Matrix perturbed(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) perturbed(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x[j];
    perturbed(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = cfg.baseline_value;
  }
  const double fx = model.Predict(x);
  const Vector out = model.Predict(perturbed);
  std::vector<double> drop(d);
  for (std::size_t i = 0; i < d; ++i) drop[i] = fx - out(static_cast<Eigen::Index>(i));
  return SafePearson(attr, drop);
}

MetricValue Sufficiency(const Matrix& expl, std::span<const int> predictions, const FaithfulnessConfig& cfg) {
  const auto n = expl.rows();
  Require(n >= 2, "sufficiency needs at least two records");
  Require(static_cast<std::size_t>(n) == predictions.size(), "predictions must align with explanations");
  const Vector norms = expl.rowwise().norm();
  double total = 0.0;
  std::size_t scored = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::size_t neighbors = 0;
    std::size_t agree = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double dist = (expl.row(i) - expl.row(j)).norm();
      if (dist > cfg.similarity_threshold * std::max(norms(i), norms(j))) continue;
      ++neighbors;
      agree += predictions[static_cast<std::size_t>(j)] == predictions[static_cast<std::size_t>(i)];
    }
    if (neighbors < 2) continue;
    total += static_cast<double>(agree) / static_cast<double>(neighbors);
    ++scored;
  }
  if (scored == 0) return {0.0, true};
  return {total / static_cast<double>(scored), false};
}

FaithfulnessReport EvaluateFaithfulness(const MlpModel& model, const TabularDataset& ds,
                                        const ExplanationMatrix& expl, const FaithfulnessConfig& cfg) {
  Require(!ds.empty(), "faithfulness needs records");
  cfg.Validate(ds.num_features());
  Rng rng(DeriveSeed(cfg.seed, 0xfa17));
  auto rows = Permutation(ds.size(), rng);
  rows.resize(std::min(rows.size(), static_cast<std::size_t>(cfg.sample_size)));
  std::sort(rows.begin(), rows.end());
  const TabularDataset sample = Subset(ds, rows);
  const Matrix attrs = RowsFor(expl, sample.record_ids);

  FaithfulnessReport report;
  report.record_ids = sample.record_ids;
  const auto d = static_cast<std::size_t>(sample.features.cols());
  for (Eigen::Index r = 0; r < sample.features.rows(); ++r) {
    const std::span<const double> x(sample.features.data() + r * sample.features.cols(), d);
    const std::span<const double> a(attrs.data() + r * attrs.cols(), d);
    const auto id = sample.record_ids[static_cast<std::size_t>(r)];
    const MetricValue corr = FaithfulnessCorrelation(model, x, a, cfg, DeriveSeed(cfg.seed, id));
    const MetricValue est = FaithfulnessEstimate(model, x, a, cfg);
    report.correlation_per_record.push_back(corr.value);
    report.estimate_per_record.push_back(est.value);
    report.correlation_undefined += corr.undefined;
    report.estimate_undefined += est.undefined;
  }
  report.correlation = stats::Mean(report.correlation_per_record);
  report.estimate = stats::Mean(report.estimate_per_record);
  if (sample.size() >= 2) {
    const MetricValue suff = Sufficiency(attrs, PredictLabels(model, sample.features), cfg);
    report.sufficiency = suff.value;
    report.sufficiency_undefined = suff.undefined;
  } else {
    report.sufficiency_undefined = true;
  }
  return report;
}

nlohmann::json ToJson(const FaithfulnessReport& report) {
  return {{"correlation", report.correlation},
          {"estimate", report.estimate},
          {"sufficiency", report.sufficiency},
          {"records", report.record_ids.size()},
          {"correlation_undefined", report.correlation_undefined},
          {"estimate_undefined", report.estimate_undefined},
          {"sufficiency_undefined", report.sufficiency_undefined}};
}

}  // namespace ppxai
