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

// Post-model defense: independent noise on every explanation value.

#ifndef PPXAI_NOISE_DEFENSE_H_
#define PPXAI_NOISE_DEFENSE_H_

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppxai/explanation.h"

namespace ppxai {

enum class NoiseFamily { kLaplace, kGaussian };
enum class NoiseCalibration { kRandom, kDp };

struct NoiseSpec {
  NoiseFamily family = NoiseFamily::kLaplace;
  NoiseCalibration calibration = NoiseCalibration::kDp;
  double epsilon = 1.0;
  double delta = 1e-6;
  double random_low = 0.5;
  double random_high = 1.5;
  std::uint64_t seed = 0;

  void Validate() const;
  // "random-laplace", "random-gaussian", "dp-laplace", "dp-gaussian".
  std::string Name() const;
  static NoiseSpec FromName(std::string_view name);
};

nlohmann::json ToJson(const NoiseSpec& spec);

// Per-column observed range, max - min.
struct SensitivityProfile {
  std::vector<double> delta;
};

SensitivityProfile EstimateSensitivity(const ExplanationMatrix& m);

// Per-column noise scale: Laplace b or Gaussian standard deviation. Random
// calibration draws each column's factor from [low, high) with `rng`.
std::vector<double> NoiseScales(const SensitivityProfile& s, const NoiseSpec& spec, Rng& rng);

// The returned matrix carries the NoiseSpec, scales and ms/record in its metadata
// under "noise". Row r uses a stream seeded by (spec.seed, record id).
ExplanationMatrix Perturb(const ExplanationMatrix& m, const NoiseSpec& spec);

}  // namespace ppxai

#endif  // PPXAI_NOISE_DEFENSE_H_
