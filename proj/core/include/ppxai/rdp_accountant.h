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

// Renyi-DP accounting for the Poisson-subsampled Gaussian mechanism and the
// conversion of an RDP curve to an (epsilon, delta) guarantee.

#ifndef PPXAI_RDP_ACCOUNTANT_H_
#define PPXAI_RDP_ACCOUNTANT_H_

#include <cstdint>
#include <span>
#include <vector>

namespace ppxai::dp {

// {1.25, 1.5, 1.75, 2, 2.25, 2.5, 3, ..., 64} plus large orders up to 1024.
const std::vector<double>& DefaultOrders();

// RDP at `order` of one step of the sampled Gaussian mechanism with sampling
// probability `sampling_rate` and noise std / sensitivity `noise_multiplier`.
double SubsampledGaussianRdp(double sampling_rate, double noise_multiplier, double order);

// epsilon = rdp + log((a - 1) / a) - (log(delta) + log(a)) / (a - 1),
// clamped at zero.
double RdpToEpsilon(double rdp, double order, double delta);

struct EpsilonBound {
  double epsilon = 0.0;
  double order = 0.0;
};

// Minimum over `orders` of the converted bound for `steps` compositions.
// steps == 0 gives epsilon 0. Throws Error(kUnreachable) when no order
// yields a finite bound.
EpsilonBound ComputeEpsilon(std::int64_t steps, double sampling_rate, double noise_multiplier,
                            double delta, std::span<const double> orders);
EpsilonBound ComputeEpsilon(std::int64_t steps, double sampling_rate, double noise_multiplier,
                            double delta);

// Smallest noise multiplier whose epsilon does not exceed `target_epsilon`,
// found by bracketing and bisection; the returned multiplier's epsilon is
// within 0.1% of the target. Throws Error(kUnreachable) when the target lies
// below what the order grid can certify.
double CalibrateNoise(double target_epsilon, std::int64_t steps, double sampling_rate,
                      double delta);

}  // namespace ppxai::dp

#endif  // PPXAI_RDP_ACCOUNTANT_H_
