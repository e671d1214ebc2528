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

#include "ppxai/noise_defense.h"

#include <cmath>
#include <random>

#include "ppxai/secure_noise.h"

namespace ppxai {

void NoiseSpec::Validate() const {
  if (calibration == NoiseCalibration::kDp) {
    Require(epsilon > 0.0 && std::isfinite(epsilon), "noise epsilon must be positive");
    if (family == NoiseFamily::kGaussian) Require(delta > 0.0 && delta < 1.0, "noise delta must be in (0, 1)");
  } else {
    Require(random_low > 0.0 && random_low < random_high, "random scale range needs 0 < low < high");
  }
}

std::string NoiseSpec::Name() const {
  return std::string(calibration == NoiseCalibration::kDp ? "dp-" : "random-") +
         (family == NoiseFamily::kLaplace ? "laplace" : "gaussian");
}

NoiseSpec NoiseSpec::FromName(std::string_view name) {
  NoiseSpec spec;
  if (name == "dp-laplace") {
    spec.calibration = NoiseCalibration::kDp;
    spec.family = NoiseFamily::kLaplace;
  } else if (name == "dp-gaussian") {
    spec.calibration = NoiseCalibration::kDp;
    spec.family = NoiseFamily::kGaussian;
  } else if (name == "random-laplace") {
    spec.calibration = NoiseCalibration::kRandom;
    spec.family = NoiseFamily::kLaplace;
  } else if (name == "random-gaussian") {
    spec.calibration = NoiseCalibration::kRandom;
    spec.family = NoiseFamily::kGaussian;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown noise variant '" + std::string(name) + "'");
  }
  return spec;
}

nlohmann::json ToJson(const NoiseSpec& spec) {
  nlohmann::json j{{"variant", spec.Name()}, {"seed", spec.seed}};
  if (spec.calibration == NoiseCalibration::kDp) {
    j["epsilon"] = spec.epsilon;
    if (spec.family == NoiseFamily::kGaussian) j["delta"] = spec.delta;
    j["sensitivity_note"] = "empirical per-column range; not a formal DP guarantee";
  } else {
    j["random_scale_range"] = {spec.random_low, spec.random_high};
  }
  return j;
}

SensitivityProfile EstimateSensitivity(const ExplanationMatrix& m) {
  Require(m.size() >= 1, "sensitivity needs a nonempty explanation matrix");
  SensitivityProfile s;
  s.delta.resize(m.num_features());
  for (std::size_t c = 0; c < m.num_features(); ++c) {
    const auto col = m.values.col(static_cast<Eigen::Index>(c));
    s.delta[c] = col.maxCoeff() - col.minCoeff();
  }
  return s;
}

std::vector<double> NoiseScales(const SensitivityProfile& s, const NoiseSpec& spec, Rng& rng) {
  spec.Validate();
  std::vector<double> scales(s.delta.size());
  const double gaussian_factor = std::sqrt(2.0 * std::log(1.25 / spec.delta));
  for (std::size_t c = 0; c < scales.size(); ++c) {
    if (spec.calibration == NoiseCalibration::kDp) {
      scales[c] = s.delta[c] / spec.epsilon;
      if (spec.family == NoiseFamily::kGaussian) scales[c] *= gaussian_factor;
    } else {
      const double factor = spec.random_low + (spec.random_high - spec.random_low) * Uniform01(rng);
      scales[c] = factor * s.delta[c];
    }
  }
  return scales;
}

ExplanationMatrix Perturb(const ExplanationMatrix& m, const NoiseSpec& spec) {
  Require(m.size() >= 1, "cannot perturb an empty explanation matrix");
  spec.Validate();
  const SensitivityProfile sensitivity = EstimateSensitivity(m);
  Rng scale_rng(DeriveSeed(spec.seed, 0x5ca1e));
  const std::vector<double> scales = NoiseScales(sensitivity, spec, scale_rng);

  ExplanationMatrix out = m;
  const Stopwatch clock;
  const auto d = static_cast<Eigen::Index>(m.num_features());
  for (std::size_t r = 0; r < m.size(); ++r) {
    Rng rng(DeriveSeed(spec.seed, m.record_ids[r]));
    auto row = out.values.row(static_cast<Eigen::Index>(r));
    if (spec.calibration == NoiseCalibration::kDp) {
      for (Eigen::Index c = 0; c < d; ++c) {
        const double scale = scales[static_cast<std::size_t>(c)];
        row(c) = spec.family == NoiseFamily::kLaplace ? noise::AddLaplace(rng, row(c), scale)
                                                      : noise::AddGaussian(rng, row(c), scale);
      }
    } else if (spec.family == NoiseFamily::kLaplace) {
      for (Eigen::Index c = 0; c < d; ++c) {
        const double scale = scales[static_cast<std::size_t>(c)];
        if (scale == 0.0) continue;
        const double e = std::exponential_distribution<double>(1.0)(rng);
        row(c) += ((rng() >> 63) != 0 ? -scale : scale) * e;
      }
    } else {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (Eigen::Index c = 0; c < d; ++c) {
        const double scale = scales[static_cast<std::size_t>(c)];
        if (scale != 0.0) row(c) += scale * normal(rng);
      }
    }
  }
  const double ms_per_record = clock.Millis() / static_cast<double>(m.size());

  nlohmann::json meta = ToJson(spec);
  meta["sensitivity"] = sensitivity.delta;
  meta["scales"] = scales;
  meta["ms_per_record"] = ms_per_record;
  out.metadata["noise"] = std::move(meta);
  return out;
}

}  // namespace ppxai
