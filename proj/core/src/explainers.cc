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

#include "ppxai/explainers.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace ppxai {
namespace {

constexpr int kMaxExactFeatures = 15;

std::span<const double> RowOf(const Matrix& m, Eigen::Index r) {
  return {m.data() + r * m.cols(), static_cast<std::size_t>(m.cols())};
}

Eigen::Map<const Eigen::RowVectorXd> AsRow(std::span<const double> x) {
  return {x.data(), static_cast<Eigen::Index>(x.size())};
}

// Constrained weighted least squares: minimize sum_k w_k (y_k - z_k . phi)^2
// subject to sum(phi) = total, solved through its KKT system.
Vector SolveShapley(const Matrix& z, const Vector& y, const Vector& w, double total) {
  const Eigen::Index d = z.cols();
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(d + 1, d + 1);
  kkt.topLeftCorner(d, d) = z.transpose() * w.asDiagonal() * z;
  kkt.block(0, d, d, 1).setOnes();
  kkt.block(d, 0, 1, d).setOnes();
  Eigen::VectorXd rhs(d + 1);
  rhs.head(d) = z.transpose() * (w.asDiagonal() * y);
  rhs(d) = total;
  const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
  return sol.head(d);
}

double LogBinomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

void ExplainerConfig::Validate() const {
  Require(ig_steps >= 1, "ig_steps must be at least 1");
  Require(sg_samples >= 1, "sg_samples must be at least 1");
  Require(sg_sigma > 0.0, "sg_sigma must be positive");
  Require(shap_background_size >= 1, "shap_background_size must be at least 1");
  Require(shap_coalitions >= 0, "shap_coalitions must be EXACT or positive");
  Require(lime_samples >= 1, "lime_samples must be at least 1");
  Require(lime_kernel_width >= 0.0, "lime_kernel_width must be nonnegative");
  Require(lime_top_k >= 0, "lime_top_k must be nonnegative");
  Require(lime_ridge >= 0.0, "lime_ridge must be nonnegative");
}

std::string ExplainerConfig::Digest(ExplainerMethod method) const {
  nlohmann::json j = ToJson(*this);
  j["method"] = std::string(ToString(method));
  return Fnv1aHex(j.dump());
}

nlohmann::json ToJson(const ExplainerConfig& cfg) {
  nlohmann::json j{{"ig_steps", cfg.ig_steps},
                   {"ig_baseline", cfg.ig_baseline},
                   {"ig_midpoint", cfg.ig_midpoint},
                   {"sg_samples", cfg.sg_samples},
                   {"sg_sigma", cfg.sg_sigma},
                   {"shap_background_size", cfg.shap_background_size},
                   {"lime_samples", cfg.lime_samples},
                   {"lime_kernel_width", cfg.lime_kernel_width},
                   {"lime_top_k", cfg.lime_top_k},
                   {"lime_ridge", cfg.lime_ridge}};
  if (cfg.shap_coalitions == kExactCoalitions) {
    j["shap_coalitions"] = "EXACT";
  } else {
    j["shap_coalitions"] = cfg.shap_coalitions;
  }
  return j;
}

ExplainerConfig ExplainerConfigFromJson(const nlohmann::json& j) {
  ExplainerConfig cfg;
  try {
    cfg.ig_steps = j.value("ig_steps", cfg.ig_steps);
    cfg.ig_baseline = j.value("ig_baseline", cfg.ig_baseline);
    cfg.ig_midpoint = j.value("ig_midpoint", cfg.ig_midpoint);
    cfg.sg_samples = j.value("sg_samples", cfg.sg_samples);
    cfg.sg_sigma = j.value("sg_sigma", cfg.sg_sigma);
    cfg.shap_background_size = j.value("shap_background_size", cfg.shap_background_size);
    if (j.contains("shap_coalitions")) {
      const auto& c = j.at("shap_coalitions");
      if (c.is_string()) {
        if (c.get<std::string>() != "EXACT") {
          throw Error(ErrorCode::kInvalidArgument, "shap_coalitions must be an integer or \"EXACT\"");
        }
        cfg.shap_coalitions = kExactCoalitions;
      } else {
        cfg.shap_coalitions = c.get<int>();
        Require(cfg.shap_coalitions > 0, "sampled shap_coalitions must be positive");
      }
    }
    cfg.lime_samples = j.value("lime_samples", cfg.lime_samples);
    cfg.lime_kernel_width = j.value("lime_kernel_width", cfg.lime_kernel_width);
    cfg.lime_top_k = j.value("lime_top_k", cfg.lime_top_k);
    cfg.lime_ridge = j.value("lime_ridge", cfg.lime_ridge);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad explainer config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

ExplainerContext ExplainerContext::FromMatrix(const Matrix& rows) {
  Require(rows.rows() >= 1, "explainer context needs at least one row");
  ExplainerContext ctx;
  ctx.background = rows;
  const Eigen::Index d = rows.cols();
  ctx.feature_std = Vector::Ones(d);
  for (Eigen::Index c = 0; c < d; ++c) {
    FeatureGroup g;
    g.name = "x" + std::to_string(c);
    g.begin = static_cast<std::size_t>(c);
    ctx.groups.push_back(g);
    ctx.category_frequencies.emplace_back();
    if (rows.rows() >= 2) {
      const double mean = rows.col(c).mean();
      const double sd = std::sqrt((rows.col(c).array() - mean).square().sum() / static_cast<double>(rows.rows() - 1));
      if (sd > 0.0) ctx.feature_std(c) = sd;
    }
  }
  return ctx;
}

ExplainerContext MakeContext(const TabularDataset& train, const ExplainerConfig& cfg, std::uint64_t seed) {
  Require(!train.empty(), "explainer context needs training rows");
  Rng rng(DeriveSeed(seed, 0xbac9));
  const auto perm = Permutation(train.size(), rng);
  const std::size_t k = std::min(train.size(), static_cast<std::size_t>(cfg.shap_background_size));
  std::vector<std::size_t> rows(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(rows.begin(), rows.end());

  ExplainerContext ctx = ExplainerContext::FromMatrix(train.features);
  ctx.background = Matrix(static_cast<Eigen::Index>(k), train.features.cols());
  for (std::size_t i = 0; i < k; ++i) {
    ctx.background.row(static_cast<Eigen::Index>(i)) = train.features.row(static_cast<Eigen::Index>(rows[i]));
  }
  ctx.groups = train.groups;
  ctx.category_frequencies.assign(train.groups.size(), {});
  for (std::size_t gi = 0; gi < train.groups.size(); ++gi) {
    const FeatureGroup& g = train.groups[gi];
    if (g.kind == ColumnKind::kContinuous) continue;
    auto& freq = ctx.category_frequencies[gi];
    freq.assign(std::max<std::size_t>(g.categories.size(), 1), 0.0);
    std::size_t counted = 0;
    for (std::size_t r = 0; r < train.size(); ++r) {
      const int c = DecodeCategory(g, RowOf(train.features, static_cast<Eigen::Index>(r)));
      if (c < 0 || static_cast<std::size_t>(c) >= freq.size()) continue;
      freq[static_cast<std::size_t>(c)] += 1.0;
      ++counted;
    }
    for (double& f : freq) f /= static_cast<double>(std::max<std::size_t>(counted, 1));
  }
  return ctx;
}

Vector ExplainIg(const MlpModel& model, std::span<const double> x, const ExplainerConfig& cfg) {
  const auto d = static_cast<Eigen::Index>(x.size());
  Vector baseline = Vector::Zero(d);
  if (!cfg.ig_baseline.empty()) {
    Require(cfg.ig_baseline.size() == x.size(), "IG baseline dimension must match the input");
    baseline = Eigen::Map<const Vector>(cfg.ig_baseline.data(), d);
  }
  const Vector delta = Eigen::Map<const Vector>(x.data(), d) - baseline;
  if (delta.isZero(0.0)) return Vector::Zero(d);
  const int m = cfg.ig_steps;
  Matrix path(m, d);
  for (int k = 0; k < m; ++k) {
    const double alpha = (k + (cfg.ig_midpoint ? 0.5 : 0.0)) / m;
    path.row(k) = (baseline + alpha * delta).transpose();
  }
  const Matrix grads = model.InputGradients(path);
  const Vector mean_grad = grads.colwise().mean().transpose();
  return delta.cwiseProduct(mean_grad);
}

Vector ExplainSg(const MlpModel& model, std::span<const double> x, const ExplainerConfig& cfg,
                 std::uint64_t seed) {
  Require(cfg.sg_samples >= 1 && cfg.sg_sigma > 0.0, "SmoothGrad needs samples >= 1 and sigma > 0");
  const auto d = static_cast<Eigen::Index>(x.size());
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, cfg.sg_sigma);
  Matrix noisy(cfg.sg_samples, d);
  for (int s = 0; s < cfg.sg_samples; ++s) {
    for (Eigen::Index c = 0; c < d; ++c) noisy(s, c) = x[static_cast<std::size_t>(c)] + normal(rng);
  }
  return model.InputGradients(noisy).colwise().mean().transpose();
}

Vector ExplainShap(const MlpModel& model, std::span<const double> x, const ExplainerConfig& cfg,
                   const ExplainerContext& ctx, std::uint64_t seed) {
  const Matrix& bg = ctx.background;
  Require(bg.rows() >= 1, "KernelSHAP needs a nonempty background set");
  const int d = static_cast<int>(x.size());
  Require(bg.cols() == d, "background dimension must match the input");
  const bool exact = cfg.shap_coalitions == kExactCoalitions;
  if (exact && d > kMaxExactFeatures) {
    throw Error(ErrorCode::kInvalidArgument,
                "EXACT KernelSHAP supports at most " + std::to_string(kMaxExactFeatures) + " features");
  }
  const auto xrow = AsRow(x);

  // Coalition masks (1 = feature taken from x) and their regression weights.
  Matrix masks;
  Vector weights;
  if (d == 1) {
    masks = Matrix::Zero(0, 1);
    weights = Vector::Zero(0);
  } else if (exact) {
    const Eigen::Index count = (Eigen::Index{1} << d) - 2;
    masks = Matrix::Zero(count, d);
    weights.resize(count);
    for (Eigen::Index s = 1; s <= count; ++s) {
      int size = 0;
      for (int i = 0; i < d; ++i) {
        if ((s >> i) & 1) {
          masks(s - 1, i) = 1.0;
          ++size;
        }
      }
      weights(s - 1) = (d - 1) / std::exp(LogBinomial(d, size) + std::log(size) + std::log(d - size));
    }
  } else {
    // Sizes drawn proportionally to the total kernel mass per size; each
    // draw is paired with its complement.
    std::vector<double> size_mass(static_cast<std::size_t>(d - 1));
    for (int s = 1; s < d; ++s) size_mass[static_cast<std::size_t>(s - 1)] = 1.0 / (s * (d - s));
    std::vector<double> cdf(size_mass.size());
    std::partial_sum(size_mass.begin(), size_mass.end(), cdf.begin());
    for (double& c : cdf) c /= cdf.back();
    Rng rng(seed);
    const int pairs = std::max(1, cfg.shap_coalitions / 2);
    masks = Matrix::Zero(2 * pairs, d);
    weights = Vector::Ones(2 * pairs);
    std::vector<int> order(static_cast<std::size_t>(d));
    for (int p = 0; p < pairs; ++p) {
      const double u = Uniform01(rng);
      const int size = 1 + static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      std::iota(order.begin(), order.end(), 0);
      for (int i = 0; i < size; ++i) {
        const auto j = static_cast<std::size_t>(i) + UniformIndex(rng, static_cast<std::size_t>(d - i));
        std::swap(order[static_cast<std::size_t>(i)], order[j]);
      }
      masks.row(2 * p).setZero();
      masks.row(2 * p + 1).setOnes();
      for (int i = 0; i < size; ++i) {
        masks(2 * p, order[static_cast<std::size_t>(i)]) = 1.0;
        masks(2 * p + 1, order[static_cast<std::size_t>(i)]) = 0.0;
      }
    }
  }

  const Eigen::Index nb = bg.rows();
  auto value = [&](const Matrix& coalitions) {
    Matrix batch(coalitions.rows() * nb, d);
    for (Eigen::Index s = 0; s < coalitions.rows(); ++s) {
      for (Eigen::Index b = 0; b < nb; ++b) {
        batch.row(s * nb + b) = coalitions.row(s).cwiseProduct(xrow) +
                                (1.0 - coalitions.row(s).array()).matrix().cwiseProduct(bg.row(b));
      }
    }
    const Vector out = model.Predict(batch);
    Vector v(coalitions.rows());
    for (Eigen::Index s = 0; s < coalitions.rows(); ++s) v(s) = out.segment(s * nb, nb).mean();
    return v;
  };
  const double v_empty = model.Predict(bg).mean();
  const double v_full = model.Predict(x);
  const double total = v_full - v_empty;
  if (d == 1) return Vector::Constant(1, total);
  const Vector y = value(masks).array() - v_empty;
  return SolveShapley(masks, y, weights, total);
}

LimeResult ExplainLimeDetailed(const MlpModel& model, std::span<const double> x, const ExplainerConfig& cfg,
                               const ExplainerContext& ctx, std::uint64_t seed) {
  const auto d = static_cast<Eigen::Index>(x.size());
  Require(cfg.lime_samples >= d + 2, "lime_samples must be at least d + 2");
  Require(ctx.feature_std.size() == d, "LIME context dimension must match the input");
  const double width = cfg.lime_kernel_width > 0.0 ? cfg.lime_kernel_width : 0.75 * std::sqrt(static_cast<double>(d));
  const auto xrow = AsRow(x);

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = cfg.lime_samples;
  Matrix z(n, d);
  z.row(0) = xrow;
  for (int k = 1; k < n; ++k) {
    z.row(k) = xrow;
    for (std::size_t gi = 0; gi < ctx.groups.size(); ++gi) {
      const FeatureGroup& g = ctx.groups[gi];
      const auto begin = static_cast<Eigen::Index>(g.begin);
      if (g.kind == ColumnKind::kContinuous) {
        z(k, begin) += ctx.feature_std(begin) * normal(rng);
        continue;
      }
      const auto& freq = ctx.category_frequencies[gi];
      double u = Uniform01(rng);
      std::size_t c = 0;
      while (c + 1 < freq.size() && u >= freq[c]) u -= freq[c++];
      if (g.kind == ColumnKind::kCategorical) {
        z.block(k, begin, 1, static_cast<Eigen::Index>(g.width)).setZero();
        z(k, begin + static_cast<Eigen::Index>(c)) = 1.0;
      } else {
        z(k, begin) = static_cast<double>(c);
      }
    }
  }
  const Vector y = model.Predict(z);
  Vector w(n);
  for (int k = 0; k < n; ++k) w(k) = std::exp(-(z.row(k) - xrow).squaredNorm() / (width * width));

  Eigen::MatrixXd design(n, d + 1);
  design.col(0).setOnes();
  design.rightCols(d) = z.rowwise() - xrow;
  Eigen::MatrixXd gram = design.transpose() * w.asDiagonal() * design;
  gram.diagonal().tail(d).array() += cfg.lime_ridge;
  const Eigen::VectorXd rhs = design.transpose() * (w.asDiagonal() * y);
  const Eigen::VectorXd beta = gram.ldlt().solve(rhs);

  LimeResult result;
  result.intercept = beta(0);
  result.coefficients = beta.tail(d);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  result.condition_number = lo > 0.0 ? eig.eigenvalues().maxCoeff() / lo : std::numeric_limits<double>::infinity();

  const int k = cfg.lime_top_k == 0 ? static_cast<int>(d) : std::min<int>(cfg.lime_top_k, static_cast<int>(d));
  if (k < d) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(d));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
      return std::abs(result.coefficients(a)) > std::abs(result.coefficients(b));
    });
    for (std::size_t i = static_cast<std::size_t>(k); i < idx.size(); ++i) result.coefficients(idx[i]) = 0.0;
  }
  return result;
}

Vector ExplainLime(const MlpModel& model, std::span<const double> x, const ExplainerConfig& cfg,
                   const ExplainerContext& ctx, std::uint64_t seed) {
  return ExplainLimeDetailed(model, x, cfg, ctx, seed).coefficients;
}

Vector Explain(ExplainerMethod method, const MlpModel& model, std::span<const double> x,
               const ExplainerConfig& cfg, const ExplainerContext& ctx, std::uint64_t seed) {
  switch (method) {
    case ExplainerMethod::kIg:
      return ExplainIg(model, x, cfg);
    case ExplainerMethod::kSg:
      return ExplainSg(model, x, cfg, seed);
    case ExplainerMethod::kShap:
      return ExplainShap(model, x, cfg, ctx, seed);
    case ExplainerMethod::kLime:
      return ExplainLime(model, x, cfg, ctx, seed);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown explainer");
}

ExplanationMatrix ExplainDataset(ExplainerMethod method, const MlpModel& model, const TabularDataset& ds,
                                 const ExplainerConfig& cfg, const ExplainerContext& ctx,
                                 std::uint64_t base_seed) {
  cfg.Validate();
  Require(!ds.empty(), "cannot explain an empty dataset");
  const Stopwatch clock;
  ExplanationMatrix m;
  m.method = method;
  m.feature_names = ds.feature_names;
  m.record_ids = ds.record_ids;
  m.config_digest = cfg.Digest(method);
  m.values.resize(ds.features.rows(), ds.features.cols());
  for (Eigen::Index r = 0; r < ds.features.rows(); ++r) {
    const auto seed = DeriveSeed(base_seed, ds.record_ids[static_cast<std::size_t>(r)]);
    m.values.row(r) = Explain(method, model, RowOf(ds.features, r), cfg, ctx, seed).transpose();
  }
  const double seconds = clock.Seconds();
  m.metadata["seconds"] = seconds;
  m.metadata["ms_per_record"] = 1e3 * seconds / static_cast<double>(ds.size());
  m.metadata["config"] = ToJson(cfg);
  m.Validate();
  return m;
}

}  // namespace ppxai
