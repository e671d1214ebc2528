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

#include "ppxai/copula.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "ppxai/dataset_io.h"
#include "ppxai/stats.h"

namespace ppxai {
namespace {

constexpr std::size_t kBlockRows = 1024;
constexpr int kMaxRedraws = 100;

std::span<const double> RowSpan(const Matrix& m, std::size_t r) {
  return {m.data() + r * static_cast<std::size_t>(m.cols()), static_cast<std::size_t>(m.cols())};
}

// Category index -> [lower, upper) slice of (0, 1) by cumulative frequency.
std::vector<double> CumulativeBounds(const std::vector<double>& frequencies) {
  std::vector<double> bounds(frequencies.size() + 1, 0.0);
  for (std::size_t k = 0; k < frequencies.size(); ++k) bounds[k + 1] = bounds[k] + frequencies[k];
  bounds.back() = 1.0;
  return bounds;
}

double ClampUnit(double u) { return std::clamp(u, 1e-12, 1.0 - 1e-12); }

double InverseEmpirical(const std::vector<double>& sorted, double u) {
  if (sorted.size() == 1) return sorted[0];
  const double pos = u * static_cast<double>(sorted.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(pos), sorted.size() - 2);
  const double frac = pos - static_cast<double>(i);
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

std::size_t CategoryOf(const std::vector<double>& bounds, double u) {
  const auto it = std::upper_bound(bounds.begin() + 1, bounds.end() - 1, u);
  return static_cast<std::size_t>(it - (bounds.begin() + 1));
}

struct RowHash {
  std::size_t operator()(const std::vector<double>& row) const {
    return static_cast<std::size_t>(
        HashString({reinterpret_cast<const char*>(row.data()), row.size() * sizeof(double)}));
  }
};

std::vector<double> RowKey(std::span<const double> features, int target) {
  std::vector<double> key(features.begin(), features.end());
  key.push_back(target);
  return key;
}

}  // namespace

Matrix RepairCorrelation(const Matrix& c, double floor) {
  const Eigen::MatrixXd sym = 0.5 * (Eigen::MatrixXd(c) + Eigen::MatrixXd(c).transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  Eigen::VectorXd values = solver.eigenvalues().cwiseMax(floor);
  Eigen::MatrixXd repaired =
      solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().transpose();
  const Eigen::VectorXd d = repaired.diagonal().cwiseSqrt().cwiseInverse();
  repaired = d.asDiagonal() * repaired * d.asDiagonal();
  repaired = 0.5 * (repaired + repaired.transpose());
  repaired.diagonal().setOnes();
  return repaired;
}

CopulaModel FitCopula(const TabularDataset& ds) {
  Require(ds.size() >= 2, "copula fit needs at least two rows");
  const std::size_t n = ds.size();
  CopulaModel model;
  model.layout = Subset(ds, {});

  std::vector<std::vector<double>> scores;
  for (const auto& g : ds.groups) {
    CopulaMargin margin;
    margin.name = g.name;
    margin.kind = g.kind;
    std::vector<double> z(n, 0.0);
    if (g.kind == ColumnKind::kContinuous) {
      const auto col = ds.features.col(static_cast<Eigen::Index>(g.begin));
      std::vector<double> values(col.data(), col.data() + 0);
      values.resize(n);
      for (std::size_t r = 0; r < n; ++r) values[r] = col(static_cast<Eigen::Index>(r));
      margin.sorted_values = values;
      std::sort(margin.sorted_values.begin(), margin.sorted_values.end());
      margin.degenerate = margin.sorted_values.front() == margin.sorted_values.back();
      if (!margin.degenerate) {
        const auto ranks = stats::AverageRanks(values);
        for (std::size_t r = 0; r < n; ++r) {
          z[r] = stats::NormalQuantile(ranks[r] / static_cast<double>(n + 1));
        }
      }
    } else {
      const std::size_t k = g.kind == ColumnKind::kBinary ? std::max<std::size_t>(g.categories.size(), 1)
                                                          : g.categories.size();
      margin.frequencies.assign(k, 0.0);
      std::vector<std::size_t> index(n);
      for (std::size_t r = 0; r < n; ++r) {
        const int c = DecodeCategory(g, RowSpan(ds.features, r));
        Require(c >= 0 && static_cast<std::size_t>(c) < k,
                "copula fit needs known categories in column '" + g.name + "'");
        index[r] = static_cast<std::size_t>(c);
        margin.frequencies[index[r]] += 1.0;
      }
      for (double& f : margin.frequencies) f /= static_cast<double>(n);
      margin.degenerate = *std::max_element(margin.frequencies.begin(), margin.frequencies.end()) == 1.0;
      if (!margin.degenerate) {
        const auto bounds = CumulativeBounds(margin.frequencies);
        for (std::size_t r = 0; r < n; ++r) {
          const double mid = 0.5 * (bounds[index[r]] + bounds[index[r] + 1]);
          z[r] = stats::NormalQuantile(ClampUnit(mid));
        }
      }
    }
    model.margins.push_back(std::move(margin));
    scores.push_back(std::move(z));
  }

  CopulaMargin target;
  target.name = ds.target_name;
  target.kind = ColumnKind::kBinary;
  target.is_target = true;
  target.frequencies.assign(2, 0.0);
  for (int y : ds.target) target.frequencies[static_cast<std::size_t>(y != 0)] += 1.0;
  for (double& f : target.frequencies) f /= static_cast<double>(n);
  model.positive_rate = target.frequencies[1];
  target.degenerate = target.frequencies[0] == 1.0 || target.frequencies[1] == 1.0;
  {
    std::vector<double> z(n, 0.0);
    if (!target.degenerate) {
      const auto bounds = CumulativeBounds(target.frequencies);
      for (std::size_t r = 0; r < n; ++r) {
        const std::size_t c = ds.target[r] != 0;
        z[r] = stats::NormalQuantile(ClampUnit(0.5 * (bounds[c] + bounds[c + 1])));
      }
    }
    model.margins.push_back(std::move(target));
    scores.push_back(std::move(z));
  }

  const std::size_t m = model.margins.size();
  Matrix corr = Matrix::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    if (model.margins[i].degenerate) continue;
    for (std::size_t j = i + 1; j < m; ++j) {
      if (model.margins[j].degenerate) continue;
      double rho = 0.0;
      try {
        rho = stats::Pearson(scores[i], scores[j]);
      } catch (const Error&) {
        rho = 0.0;
      }
      corr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rho;
      corr(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = rho;
    }
  }
  model.correlation = RepairCorrelation(corr);
  return model;
}

TabularDataset SampleCopula(const CopulaModel& model, std::size_t n, std::uint64_t seed,
                            const TabularDataset* training) {
  Require(n >= 1, "sample size must be at least 1");
  const std::size_t m = model.margins.size();
  Require(m >= 1 && static_cast<std::size_t>(model.correlation.rows()) == m,
          "copula model is not fitted");
  const TabularDataset& layout = model.layout;
  const Eigen::LLT<Eigen::MatrixXd> llt{Eigen::MatrixXd(model.correlation)};
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumerical, "copula correlation is not positive definite");
  }
  const Eigen::MatrixXd lower = llt.matrixL();

  std::vector<std::vector<double>> bounds(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (!model.margins[j].frequencies.empty()) bounds[j] = CumulativeBounds(model.margins[j].frequencies);
  }
  bool has_free_continuous = false;
  for (const auto& margin : model.margins) {
    has_free_continuous = has_free_continuous ||
                          (margin.kind == ColumnKind::kContinuous && !margin.degenerate);
  }

  std::unordered_set<std::vector<double>, RowHash> seen;
  if (training != nullptr && has_free_continuous) {
    for (std::size_t r = 0; r < training->size(); ++r) {
      seen.insert(RowKey(RowSpan(training->features, r), training->target[r]));
    }
  }

  TabularDataset out = layout;
  out.features = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(layout.num_features()));
  out.target.assign(n, 0);
  out.record_ids.resize(n);
  out.sensitive.clear();

  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd eps(static_cast<Eigen::Index>(m));
  for (std::size_t block = 0; block * kBlockRows < n; ++block) {
    Rng rng(DeriveSeed(seed, block));
    const std::size_t end = std::min(n, (block + 1) * kBlockRows);
    for (std::size_t r = block * kBlockRows; r < end; ++r) {
      auto row = out.features.row(static_cast<Eigen::Index>(r));
      for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
        for (Eigen::Index j = 0; j < eps.size(); ++j) eps(j) = normal(rng);
        const Eigen::VectorXd z = lower * eps;
        row.setZero();
        for (std::size_t j = 0; j < m; ++j) {
          const CopulaMargin& margin = model.margins[j];
          const double u = ClampUnit(stats::NormalCdf(z(static_cast<Eigen::Index>(j))));
          if (margin.is_target) {
            out.target[r] = static_cast<int>(CategoryOf(bounds[j], u));
            continue;
          }
          const FeatureGroup& g = layout.groups[j];
          if (margin.kind == ColumnKind::kContinuous) {
            row(static_cast<Eigen::Index>(g.begin)) = InverseEmpirical(margin.sorted_values, u);
          } else {
            const std::size_t c = CategoryOf(bounds[j], u);
            if (g.kind == ColumnKind::kCategorical) {
              row(static_cast<Eigen::Index>(g.begin + c)) = 1.0;
            } else {
              row(static_cast<Eigen::Index>(g.begin)) = static_cast<double>(c);
            }
          }
        }
        if (seen.empty() || !seen.contains(RowKey(RowSpan(out.features, r), out.target[r]))) break;
      }
      out.record_ids[r] = kSyntheticIdBase + static_cast<RecordId>(r);
    }
  }
  for (const auto& spec : layout.sensitive_specs) {
    out.sensitive[spec.attribute_name] = DeriveSensitiveLabels(out, spec);
  }
  return out;
}

DiagnosticScore Diagnostics(const TabularDataset& real, const TabularDataset& synth) {
  Require(!real.empty() && !synth.empty(), "diagnostics need two nonempty datasets");
  DiagnosticScore score;
  auto check = [&](bool passed, const std::string& what) {
    ++score.checks_total;
    if (passed) {
      ++score.checks_passed;
    } else {
      score.failures.push_back(what);
    }
  };

  for (const auto& g : real.groups) {
    const FeatureGroup* s = synth.FindGroup(g.name);
    const bool same_type = s != nullptr && s->kind == g.kind && s->width == g.width;
    check(same_type, g.name + ": type");
    if (!same_type) {
      check(false, g.name + ": missing values");
      check(false, g.name + ": value range");
      continue;
    }
    const auto block = synth.features.middleCols(static_cast<Eigen::Index>(s->begin),
                                                 static_cast<Eigen::Index>(s->width));
    check(block.allFinite(), g.name + ": missing values");
    if (g.kind == ColumnKind::kContinuous) {
      const auto rcol = real.features.col(static_cast<Eigen::Index>(g.begin));
      const double lo = DecodeContinuous(g, rcol.minCoeff());
      const double hi = DecodeContinuous(g, rcol.maxCoeff());
      const double slack = 1e-9 * std::max(1.0, std::abs(hi - lo));
      bool inside = true;
      for (Eigen::Index r = 0; r < block.rows() && inside; ++r) {
        const double v = DecodeContinuous(*s, block(r, 0));
        inside = v >= lo - slack && v <= hi + slack;
      }
      check(inside, g.name + ": value range");
    } else {
      std::vector<bool> observed(g.categories.size(), false);
      for (std::size_t r = 0; r < real.size(); ++r) {
        const int c = DecodeCategory(g, RowSpan(real.features, r));
        if (c >= 0 && static_cast<std::size_t>(c) < observed.size()) observed[static_cast<std::size_t>(c)] = true;
      }
      bool valid = true;
      for (std::size_t r = 0; r < synth.size() && valid; ++r) {
        const auto row = RowSpan(synth.features, r);
        if (g.kind == ColumnKind::kCategorical) {
          double sum = 0.0;
          for (std::size_t k = 0; k < s->width; ++k) {
            const double v = row[s->begin + k];
            valid = valid && (v == 0.0 || v == 1.0);
            sum += v;
          }
          valid = valid && sum == 1.0;
        } else {
          const double v = row[s->begin];
          valid = valid && (v == 0.0 || v == 1.0);
        }
        if (!valid) break;
        const int c = DecodeCategory(*s, row);
        valid = c >= 0 && static_cast<std::size_t>(c) < s->categories.size();
        if (valid) {
          const auto it = std::find(g.categories.begin(), g.categories.end(),
                                    s->categories[static_cast<std::size_t>(c)]);
          valid = it != g.categories.end() &&
                  observed[static_cast<std::size_t>(it - g.categories.begin())];
        }
      }
      check(valid, g.name + ": categories");
    }
  }
  const bool target_ok = synth.target.size() == synth.size() &&
                         std::all_of(synth.target.begin(), synth.target.end(),
                                     [](int y) { return y == 0 || y == 1; });
  check(target_ok, real.target_name + ": type");
  check(synth.target_name == real.target_name, real.target_name + ": present");

  score.data_validity = static_cast<double>(score.checks_passed) / static_cast<double>(score.checks_total);

  std::vector<std::string> real_names = real.feature_names;
  real_names.push_back(real.target_name);
  std::vector<std::string> synth_names = synth.feature_names;
  synth_names.push_back(synth.target_name);
  if (real_names == synth_names) {
    score.data_structure = 1.0;
  } else {
    std::size_t matches = 0;
    for (std::size_t i = 0; i < std::min(real_names.size(), synth_names.size()); ++i) {
      matches += real_names[i] == synth_names[i];
    }
    score.data_structure = static_cast<double>(matches) /
                           static_cast<double>(std::max(real_names.size(), synth_names.size()));
  }

  auto rate = [](const Labels& y) {
    return y.empty() ? 0.0 : static_cast<double>(std::count(y.begin(), y.end(), 1)) / static_cast<double>(y.size());
  };
  score.real_positive_rate = rate(real.target);
  score.synth_positive_rate = rate(synth.target);
  return score;
}

nlohmann::json ToJson(const CopulaModel& model) {
  nlohmann::json j;
  j["format"] = "ppxai-copula";
  j["version"] = 1;
  j["layout"] = LayoutToJson(model.layout);
  j["positive_rate"] = model.positive_rate;
  auto& margins = j["margins"] = nlohmann::json::array();
  for (const auto& m : model.margins) {
    nlohmann::json mj;
    mj["name"] = m.name;
    mj["kind"] = std::string(ToString(m.kind));
    mj["is_target"] = m.is_target;
    mj["degenerate"] = m.degenerate;
    if (m.kind == ColumnKind::kContinuous) {
      mj["sorted_values"] = m.sorted_values;
    } else {
      mj["frequencies"] = m.frequencies;
    }
    margins.push_back(std::move(mj));
  }
  auto& corr = j["correlation"] = nlohmann::json::array();
  for (Eigen::Index r = 0; r < model.correlation.rows(); ++r) {
    std::vector<double> row(model.correlation.row(r).begin(), model.correlation.row(r).end());
    corr.push_back(row);
  }
  return j;
}

CopulaModel CopulaFromJson(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "ppxai-copula") throw Error(ErrorCode::kIo, "not a copula model");
    if (j.at("version").get<int>() != 1) throw Error(ErrorCode::kUnsupported, "unsupported copula version");
    CopulaModel model;
    model.layout = LayoutFromJson(j.at("layout"));
    model.positive_rate = j.at("positive_rate").get<double>();
    for (const auto& mj : j.at("margins")) {
      CopulaMargin m;
      m.name = mj.at("name").get<std::string>();
      m.kind = ParseColumnKind(mj.at("kind").get<std::string>());
      m.is_target = mj.at("is_target").get<bool>();
      m.degenerate = mj.at("degenerate").get<bool>();
      if (m.kind == ColumnKind::kContinuous) {
        m.sorted_values = mj.at("sorted_values").get<std::vector<double>>();
      } else {
        m.frequencies = mj.at("frequencies").get<std::vector<double>>();
      }
      model.margins.push_back(std::move(m));
    }
    const auto rows = j.at("correlation").get<std::vector<std::vector<double>>>();
    const auto m = static_cast<Eigen::Index>(rows.size());
    model.correlation = Matrix(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
      Require(static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)].size()) == m,
              "copula correlation is not square");
      for (Eigen::Index c = 0; c < m; ++c) model.correlation(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    Require(static_cast<std::size_t>(m) == model.margins.size(), "copula margins and correlation disagree");
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIo, std::string("malformed copula model: ") + e.what());
  }
}

nlohmann::json ToJson(const DiagnosticScore& score) {
  return {{"data_validity", score.data_validity},
          {"data_structure", score.data_structure},
          {"checks_total", score.checks_total},
          {"checks_passed", score.checks_passed},
          {"failures", score.failures},
          {"real_positive_rate", score.real_positive_rate},
          {"synth_positive_rate", score.synth_positive_rate}};
}

}  // namespace ppxai
