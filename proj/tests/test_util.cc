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

#include "test_util.h"

#include <map>
#include <mutex>
#include <random>
#include <tuple>

#include "ppxai/fixtures.h"

namespace ppxai::testing {

MlpModel LinearModel(const std::vector<double>& w, double b, Activation output) {
  MlpModel m(w.size(), {LayerSpec{1, output}});
  for (std::size_t i = 0; i < w.size(); ++i) m.Weights(0)(0, static_cast<Eigen::Index>(i)) = w[i];
  m.Bias(0)(0) = b;
  return m;
}

MlpModel RandomModel(std::size_t input_dim, const std::vector<std::size_t>& hidden, std::uint64_t seed) {
  MlpModel m = InitModel(input_dim, ReluClassifier(hidden), seed);
  Rng rng(DeriveSeed(seed, 0xb1a5));
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (std::size_t l = 0; l < m.num_layers(); ++l) {
    auto b = m.Bias(l);
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = u(rng);
  }
  return m;
}

Vector RandomPoint(std::size_t d, Rng& rng, double lo, double hi) {
  Vector x(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = lo + (hi - lo) * Uniform01(rng);
  return x;
}

std::filesystem::path FreshTempDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("ppxai_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::optional<ErrorCode> ThrownCode(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

TabularDataset ContinuousDataset(const Matrix& x, const Labels& y, const Labels& s) {
  TabularDataset ds;
  ds.target_name = "y";
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const std::string name = "x" + std::to_string(j);
    ds.columns.push_back({name, ColumnKind::kContinuous, ColumnRole::kFeature});
    FeatureGroup g;
    g.name = name;
    g.begin = static_cast<std::size_t>(j);
    ds.groups.push_back(g);
    ds.feature_names.push_back(name);
  }
  ds.columns.push_back({"y", ColumnKind::kBinary, ColumnRole::kTarget});
  ds.features = x;
  ds.target = y;
  ds.sensitive["s"] = s;
  for (Eigen::Index i = 0; i < x.rows(); ++i) ds.record_ids.push_back(i);
  return ds;
}

const SplitBundle& FixtureSplit(const std::string& name, std::size_t rows, std::uint64_t seed) {
  static std::mutex mu;
  static std::map<std::tuple<std::string, std::size_t, std::uint64_t>, SplitBundle> cache;
  const std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_tuple(name, rows, seed);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, Split(SimulateDataset(name, rows, seed), seed)).first;
  return it->second;
}

}  // namespace ppxai::testing
