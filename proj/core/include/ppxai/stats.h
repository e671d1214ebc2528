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

#ifndef PPXAI_STATS_H_
#define PPXAI_STATS_H_

#include <span>
#include <vector>

namespace ppxai::stats {

double Mean(std::span<const double> values);

// Unbiased sample variance; zero for fewer than two values.
double Variance(std::span<const double> values);

// Pearson product-moment coefficient. Throws Error(kUndefined) when either
// input has zero variance or the lengths differ / are below two.
double Pearson(std::span<const double> a, std::span<const double> b);

// Ranks starting at 1, ties receive their average rank.
std::vector<double> AverageRanks(std::span<const double> values);

double Spearman(std::span<const double> a, std::span<const double> b);

double NormalCdf(double x);
double NormalQuantile(double p);

}  // namespace ppxai::stats

#endif  // PPXAI_STATS_H_
