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

#include "ppxai/rdp_accountant.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ppxai/common.h"

namespace ppxai::dp {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double LogSub(double a, double b) {
  if (b == kNegInf) return a;
  if (a <= b) return kNegInf;
  return a + std::log1p(-std::exp(b - a));
}

double LogErfc(double x) {
  if (x < 25.0) return std::log(std::erfc(x));
  const double x2 = x * x;
  const double series = 1.0 - 1.0 / (2.0 * x2) + 3.0 / (4.0 * x2 * x2) - 15.0 / (8.0 * x2 * x2 * x2);
  return -x2 - std::log(x) - 0.5 * std::log(std::numbers::pi) + std::log(series);
}

// log A_alpha for integer alpha: binomial expansion of the moment.
double LogAInteger(double q, double sigma, int alpha) {
  double log_a = kNegInf;
  for (int i = 0; i <= alpha; ++i) {
    const double log_coef = std::lgamma(alpha + 1.0) - std::lgamma(i + 1.0) - std::lgamma(alpha - i + 1.0);
    const double term = log_coef + i * std::log(q) + (alpha - i) * std::log1p(-q) +
                        (static_cast<double>(i) * i - i) / (2.0 * sigma * sigma);
    log_a = LogAdd(log_a, term);
  }
  return log_a;
}

// log A_alpha for fractional alpha: the two-sided series split at z0.
double LogAFractional(double q, double sigma, double alpha) {
  double log_a0 = kNegInf;
  double log_a1 = kNegInf;
  const double z0 = sigma * sigma * std::log(1.0 / q - 1.0) + 0.5;
  double log_abs_coef = 0.0;
  double sign = 1.0;
  for (int i = 0; i < 100000; ++i) {
    const double j = alpha - i;
    const double log_t0 = log_abs_coef + i * std::log(q) + j * std::log1p(-q);
    const double log_t1 = log_abs_coef + j * std::log(q) + i * std::log1p(-q);
    const double log_e0 = std::log(0.5) + LogErfc((i - z0) / (std::numbers::sqrt2 * sigma));
    const double log_e1 = std::log(0.5) + LogErfc((z0 - j) / (std::numbers::sqrt2 * sigma));
    const double log_s0 = log_t0 + (static_cast<double>(i) * i - i) / (2.0 * sigma * sigma) + log_e0;
    const double log_s1 = log_t1 + (j * j - j) / (2.0 * sigma * sigma) + log_e1;
    if (sign > 0) {
      log_a0 = LogAdd(log_a0, log_s0);
      log_a1 = LogAdd(log_a1, log_s1);
    } else {
      log_a0 = LogSub(log_a0, log_s0);
      log_a1 = LogSub(log_a1, log_s1);
    }
    if (std::max(log_s0, log_s1) < -30.0) break;
    // binom(alpha, i + 1) = binom(alpha, i) * (alpha - i) / (i + 1)
    const double ratio = (alpha - i) / (i + 1.0);
    if (ratio == 0.0) break;
    if (ratio < 0) sign = -sign;
    log_abs_coef += std::log(std::abs(ratio));
  }
  return LogAdd(log_a0, log_a1);
}

std::vector<double> BuildOrders() {
  std::vector<double> orders = {1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 3.0, 3.5, 4.0, 4.5};
  for (int a = 5; a <= 64; ++a) orders.push_back(a);
  for (double a : {80.0, 96.0, 128.0, 192.0, 256.0, 384.0, 512.0, 768.0, 1024.0}) {
    orders.push_back(a);
  }
  return orders;
}

}  // namespace

const std::vector<double>& DefaultOrders() {
  static const std::vector<double> kOrders = BuildOrders();
  return kOrders;
}

double SubsampledGaussianRdp(double q, double sigma, double order) {
  Require(q >= 0.0 && q <= 1.0, "sampling rate must lie in [0, 1]");
  Require(sigma > 0.0, "noise multiplier must be positive");
  Require(order > 1.0, "RDP order must exceed 1");
  if (q == 0.0) return 0.0;
  if (q == 1.0) return order / (2.0 * sigma * sigma);
  const double rounded = std::round(order);
  const double log_a = (rounded == order && order <= 100000.0)
                           ? LogAInteger(q, sigma, static_cast<int>(rounded))
                           : LogAFractional(q, sigma, order);
  return std::max(0.0, log_a / (order - 1.0));
}

double RdpToEpsilon(double rdp, double order, double delta) {
  Require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  Require(order > 1.0, "RDP order must exceed 1");
  const double eps =
      rdp + std::log1p(-1.0 / order) - (std::log(delta) + std::log(order)) / (order - 1.0);
  return std::max(0.0, eps);
}

EpsilonBound ComputeEpsilon(std::int64_t steps, double q, double sigma, double delta,
                            std::span<const double> orders) {
  Require(steps >= 0, "steps must be non-negative");
  Require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  Require(!orders.empty(), "order grid is empty");
  if (steps == 0) return {0.0, orders.front()};
  EpsilonBound best{std::numeric_limits<double>::infinity(), 0.0};
  for (double order : orders) {
    const double rdp = static_cast<double>(steps) * SubsampledGaussianRdp(q, sigma, order);
    if (!std::isfinite(rdp)) continue;
    const double eps = RdpToEpsilon(rdp, order, delta);
    if (eps < best.epsilon) best = {eps, order};
  }
  if (!std::isfinite(best.epsilon)) {
    throw Error(ErrorCode::kUnreachable,
                "no finite privacy bound on the order grid: increase noise or reduce steps");
  }
  return best;
}

EpsilonBound ComputeEpsilon(std::int64_t steps, double q, double sigma, double delta) {
  return ComputeEpsilon(steps, q, sigma, delta, DefaultOrders());
}

double CalibrateNoise(double target_epsilon, std::int64_t steps, double q, double delta) {
  Require(target_epsilon > 0.0, "target epsilon must be positive");
  Require(steps >= 1, "calibration needs at least one step");
  auto eps = [&](double sigma) { return ComputeEpsilon(steps, q, sigma, delta).epsilon; };

  constexpr double kMaxSigma = 1e7;
  constexpr double kMinSigma = 1e-3;
  double hi = 1.0;
  while (eps(hi) > target_epsilon) {
    hi *= 2.0;
    if (hi > kMaxSigma) {
      throw Error(ErrorCode::kUnreachable,
                  "target epsilon " + FormatDouble(target_epsilon) +
                      " is below what the accountant can certify for these steps and delta");
    }
  }
  double lo = hi / 2.0;
  while (lo > kMinSigma && eps(lo) <= target_epsilon) {
    hi = lo;
    lo /= 2.0;
  }
  if (lo <= kMinSigma) return hi;
  // Invariant: eps(lo) > target >= eps(hi).
  for (int iter = 0; iter < 200; ++iter) {
    const double e_hi = eps(hi);
    if ((target_epsilon - e_hi) / target_epsilon <= 1e-3) break;
    const double mid = std::sqrt(lo * hi);
    if (eps(mid) > target_epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace ppxai::dp
