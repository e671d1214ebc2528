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

// Discrete samplers for calibrated noise. Values are snapped to a power-of-two
// grid and perturbed by an integer multiple of it, so the released value never
// exposes the low-order bits of a floating-point sample.

#ifndef PPXAI_SECURE_NOISE_H_
#define PPXAI_SECURE_NOISE_H_

#include <cstdint>

#include "ppxai/common.h"

namespace ppxai::noise {

// Smallest power of two that is >= scale * 2^-40.
double Granularity(double scale);

// P(k) proportional to exp(-lambda k) on k = 0, 1, 2, ...; binary search
// over the CDF, one uniform draw per halving step.
std::int64_t SampleGeometric(Rng& rng, double lambda);

// P(z) proportional to exp(-lambda |z|) on the integers.
std::int64_t SampleTwoSidedGeometric(Rng& rng, double lambda);

// Discrete Gaussian with parameter sigma on the integers (rejection from a
// discrete Laplace proposal).
std::int64_t SampleDiscreteGaussian(Rng& rng, double sigma);

// x snapped to the grid of `Granularity(b)` plus discrete Laplace noise of
// scale b; variance 2 b^2 up to grid error. b == 0 returns x.
double AddLaplace(Rng& rng, double x, double b);

// Same for Gaussian noise of standard deviation sigma.
double AddGaussian(Rng& rng, double x, double sigma);

}  // namespace ppxai::noise

#endif  // PPXAI_SECURE_NOISE_H_
