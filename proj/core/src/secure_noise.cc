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

#include "ppxai/secure_noise.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ppxai::noise {
namespace {

constexpr double kGridBits = 40.0;
constexpr std::int64_t kMaxGeometric = std::numeric_limits<std::int64_t>::max();

bool Coin(Rng& rng) { return (rng() >> 63) != 0; }

double Snap(double x, double g) { return std::round(x / g) * g; }

}  // namespace

double Granularity(double scale) {
  Require(scale > 0.0 && std::isfinite(scale), "noise scale must be positive and finite");
  return std::exp2(std::ceil(std::log2(scale) - kGridBits));
}

std::int64_t SampleGeometric(Rng& rng, double lambda) {
  Require(lambda > 0.0, "geometric parameter must be positive");
  if (Uniform01(rng) > -std::expm1(-lambda * static_cast<double>(kMaxGeometric))) {
    return kMaxGeometric;
  }
  std::int64_t lo = 0;
  std::int64_t hi = kMaxGeometric;
  while (hi - lo > 1) {
    const double span = static_cast<double>(lo - hi);
    std::int64_t mid =
        lo - static_cast<std::int64_t>(std::floor((std::log(0.5) + std::log1p(std::exp(lambda * span))) / lambda));
    mid = std::clamp(mid, lo + 1, hi - 1);
    const double q = std::expm1(lambda * static_cast<double>(lo - mid)) / std::expm1(lambda * span);
    if (Uniform01(rng) <= q) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi - 1;
}

std::int64_t SampleTwoSidedGeometric(Rng& rng, double lambda) {
  while (true) {
    const std::int64_t magnitude = SampleGeometric(rng, lambda);
    const bool negative = Coin(rng);
    if (magnitude == 0 && negative) continue;
    return negative ? -magnitude : magnitude;
  }
}

std::int64_t SampleDiscreteGaussian(Rng& rng, double sigma) {
  Require(sigma > 0.0, "discrete Gaussian sigma must be positive");
  const double t = std::floor(sigma) + 1.0;
  const double shift = sigma * sigma / t;
  while (true) {
    const std::int64_t y = SampleTwoSidedGeometric(rng, 1.0 / t);
    const double gap = std::abs(static_cast<double>(y)) - shift;
    if (Uniform01(rng) < std::exp(-gap * gap / (2.0 * sigma * sigma))) return y;
  }
}

double AddLaplace(Rng& rng, double x, double b) {
  Require(b >= 0.0, "Laplace scale must be nonnegative");
  if (b == 0.0) return x;
  const double g = Granularity(b);
  return Snap(x, g) + g * static_cast<double>(SampleTwoSidedGeometric(rng, g / b));
}

double AddGaussian(Rng& rng, double x, double sigma) {
  Require(sigma >= 0.0, "Gaussian sigma must be nonnegative");
  if (sigma == 0.0) return x;
  const double g = Granularity(sigma);
  return Snap(x, g) + g * static_cast<double>(SampleDiscreteGaussian(rng, sigma / g));
}

}  // namespace ppxai::noise
