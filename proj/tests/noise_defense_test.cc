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

#include "ppxai/noise_defense.h"
#include "ppxai/secure_noise.h"
#include "test_util.h"

namespace ppxai {
namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

template <typename Draw>
Moments Sample(int n, Draw draw) {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = draw();
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  return {mean, sum_sq / n - mean * mean};
}

ExplanationMatrix MatrixOf(const Matrix& values) {
  ExplanationMatrix m;
  m.method = ExplainerMethod::kIg;
  m.values = values;
  for (Eigen::Index j = 0; j < values.cols(); ++j) m.feature_names.push_back("f" + std::to_string(j));
  for (Eigen::Index i = 0; i < values.rows(); ++i) m.record_ids.push_back(100 + i);
  return m;
}

TEST(SecureNoiseTest, GranularityIsPowerOfTwoNearScaleTimesTwoToMinusForty) {
  for (double s : {1e-6, 0.3, 1.0, 2.0, 1e5}) {
    const double g = noise::Granularity(s);
    EXPECT_EQ(g, std::exp2(std::round(std::log2(g))));
    EXPECT_GE(g, s * std::exp2(-40));
    EXPECT_LT(g, 2 * s * std::exp2(-40));
  }
}

TEST(SecureNoiseTest, GeometricMeanMatchesClosedForm) {
  Rng rng(1);
  const double lambda = 0.3;
  const Moments m = Sample(200000, [&] { return static_cast<double>(noise::SampleGeometric(rng, lambda)); });
  const double p = std::exp(-lambda);
  const double mean = p / (1 - p);
  const double var = p / ((1 - p) * (1 - p));
  EXPECT_NEAR(m.mean, mean, 4 * std::sqrt(var / 200000));
}

TEST(SecureNoiseTest, DiscreteGaussianVarianceMatchesSigmaSquared) {
  Rng rng(2);
  const double sigma = 7.5;
  const int n = 400000;
  const Moments m = Sample(n, [&] { return static_cast<double>(noise::SampleDiscreteGaussian(rng, sigma)); });
  EXPECT_NEAR(m.mean, 0.0, 4 * sigma / std::sqrt(n));
  EXPECT_NEAR(m.variance, sigma * sigma, 0.02 * sigma * sigma);
}

TEST(SecureNoiseTest, LaplaceAndGaussianMomentsAtOneMillionDraws) {
  const int n = 1000000;
  Rng rng(3);
  const double b = 2.0;
  const Moments lap = Sample(n, [&] { return noise::AddLaplace(rng, 0.0, b); });
  EXPECT_NEAR(lap.mean, 0.0, 3 * std::sqrt(2 * b * b / n));
  EXPECT_NEAR(lap.variance, 2 * b * b, 0.02 * 2 * b * b);
  const double sigma = 1.7;
  const Moments gauss = Sample(n, [&] { return noise::AddGaussian(rng, 0.0, sigma); });
  EXPECT_NEAR(gauss.mean, 0.0, 3 * sigma / std::sqrt(n));
  EXPECT_NEAR(gauss.variance, sigma * sigma, 0.02 * sigma * sigma);
}

TEST(SecureNoiseTest, ZeroScaleIsIdentity) {
  Rng rng(4);
  EXPECT_EQ(noise::AddLaplace(rng, 0.123, 0.0), 0.123);
  EXPECT_EQ(noise::AddGaussian(rng, -4.5, 0.0), -4.5);
}

TEST(SensitivityTest, ObservedColumnRange) {
  Matrix v(3, 2);
  v << -1, 5, 3, 5, 0, 5;
  const SensitivityProfile s = EstimateSensitivity(MatrixOf(v));
  EXPECT_EQ(s.delta, (std::vector<double>{4.0, 0.0}));
}

TEST(NoiseScalesTest, DpFormulasAndScalingLaw) {
  const SensitivityProfile s{{2.0, 0.0, 1.0}};
  Rng rng(0);
  NoiseSpec lap = NoiseSpec::FromName("dp-laplace");
  lap.epsilon = 1.0;
  EXPECT_EQ(NoiseScales(s, lap, rng), (std::vector<double>{2.0, 0.0, 1.0}));
  lap.epsilon = 2.0;
  EXPECT_EQ(NoiseScales(s, lap, rng), (std::vector<double>{1.0, 0.0, 0.5}));
  NoiseSpec gauss = NoiseSpec::FromName("dp-gaussian");
  gauss.epsilon = 1.0;
  gauss.delta = 1e-6;
  const double factor = std::sqrt(2 * std::log(1.25 / 1e-6));
  const auto g1 = NoiseScales(s, gauss, rng);
  EXPECT_DOUBLE_EQ(g1[0], 2.0 * factor);
  gauss.epsilon = 2.0;
  EXPECT_DOUBLE_EQ(NoiseScales(s, gauss, rng)[0], g1[0] / 2);
}

TEST(NoiseScalesTest, RandomScalesStayInRange) {
  const SensitivityProfile s{std::vector<double>(200, 3.0)};
  Rng rng(5);
  NoiseSpec spec = NoiseSpec::FromName("random-gaussian");
  for (double v : NoiseScales(s, spec, rng)) {
    EXPECT_GE(v, 0.5 * 3.0);
    EXPECT_LT(v, 1.5 * 3.0);
  }
}

TEST(NoiseSpecTest, NamesRoundTripAndValidation) {
  for (const std::string name : {"random-laplace", "random-gaussian", "dp-laplace", "dp-gaussian"}) {
    EXPECT_EQ(NoiseSpec::FromName(name).Name(), name);
  }
  EXPECT_EQ(testing::ThrownCode([] { NoiseSpec::FromName("dp-cauchy"); }), ErrorCode::kInvalidArgument);
  NoiseSpec bad = NoiseSpec::FromName("dp-laplace");
  bad.epsilon = 0.0;
  EXPECT_EQ(testing::ThrownCode([&] { bad.Validate(); }), ErrorCode::kInvalidArgument);
}

TEST(PerturbTest, LaplaceVarianceOnAMillionCells) {
  Matrix v = Matrix::Zero(1000, 1000);
  v.row(1).setConstant(2.0);  // range 2 in every column
  NoiseSpec spec = NoiseSpec::FromName("dp-laplace");
  spec.epsilon = 1.0;
  spec.seed = 7;
  const ExplanationMatrix noisy = Perturb(MatrixOf(v), spec);
  const Matrix diff = noisy.values - v;
  const double mean = diff.mean();
  const double var = (diff.array() - mean).square().mean();
  EXPECT_NEAR(var, 8.0, 0.02 * 8.0);
  EXPECT_NEAR(mean, 0.0, 3 * std::sqrt(8.0 / 1e6));
  EXPECT_EQ(noisy.metadata.at("noise").at("scales").at(0), 2.0);
}

TEST(PerturbTest, HugeEpsilonLeavesValuesUnchanged) {
  Rng rng(8);
  Matrix v(50, 6);
  for (Eigen::Index i = 0; i < v.rows(); ++i) v.row(i) = testing::RandomPoint(6, rng, -1, 1).transpose();
  NoiseSpec spec = NoiseSpec::FromName("dp-laplace");
  spec.epsilon = 1e9;
  const ExplanationMatrix noisy = Perturb(MatrixOf(v), spec);
  EXPECT_LE((noisy.values - v).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(PerturbTest, ShapeSeedsAndConstantColumns) {
  Rng rng(9);
  Matrix v(40, 5);
  for (Eigen::Index i = 0; i < v.rows(); ++i) v.row(i) = testing::RandomPoint(5, rng).transpose();
  v.col(3).setConstant(0.5);
  const ExplanationMatrix clean = MatrixOf(v);
  for (const std::string name : {"random-laplace", "random-gaussian", "dp-laplace", "dp-gaussian"}) {
    NoiseSpec spec = NoiseSpec::FromName(name);
    spec.seed = 1;
    const ExplanationMatrix a = Perturb(clean, spec);
    const ExplanationMatrix b = Perturb(clean, spec);
    spec.seed = 2;
    const ExplanationMatrix c = Perturb(clean, spec);
    EXPECT_EQ(a.values, b.values) << name;
    EXPECT_NE(a.values, c.values) << name;
    EXPECT_EQ(a.record_ids, clean.record_ids);
    EXPECT_EQ(a.feature_names, clean.feature_names);
    EXPECT_EQ(a.values.rows(), v.rows());
    EXPECT_EQ(a.values.cols(), v.cols());
    EXPECT_TRUE((a.values.col(3).array() == 0.5).all()) << name;
    EXPECT_GT(a.metadata.at("noise").at("ms_per_record").get<double>(), 0.0);
  }
}

TEST(PerturbTest, RandomFamiliesHaveDrawnScaleVariance) {
  Matrix v = Matrix::Zero(200000, 2);
  v.row(0).setConstant(1.0);
  NoiseSpec spec = NoiseSpec::FromName("random-gaussian");
  spec.seed = 3;
  const ExplanationMatrix noisy = Perturb(MatrixOf(v), spec);
  const auto scales = noisy.metadata.at("noise").at("scales").get<std::vector<double>>();
  for (Eigen::Index j = 0; j < 2; ++j) {
    const Vector diff = (noisy.values.col(j) - v.col(j)).eval();
    const double var = (diff.array() - diff.mean()).square().mean();
    const double s = scales[static_cast<std::size_t>(j)];
    EXPECT_NEAR(var, s * s, 0.02 * s * s);
  }
  spec = NoiseSpec::FromName("random-laplace");
  spec.seed = 4;
  const ExplanationMatrix lap = Perturb(MatrixOf(v), spec);
  const auto b = lap.metadata.at("noise").at("scales").get<std::vector<double>>();
  const Vector diff = (lap.values.col(0) - v.col(0)).eval();
  EXPECT_NEAR((diff.array() - diff.mean()).square().mean(), 2 * b[0] * b[0], 0.03 * 2 * b[0] * b[0]);
}

}  // namespace
}  // namespace ppxai
