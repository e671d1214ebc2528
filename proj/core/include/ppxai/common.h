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

#ifndef PPXAI_COMMON_H_
#define PPXAI_COMMON_H_

#include <chrono>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ppxai {

// Row-major so that one record is one contiguous row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Labels = std::vector<int>;
using RecordId = std::int64_t;
using Rng = std::mt19937_64;

enum class ErrorCode {
  kInvalidArgument,
  kSchemaMismatch,
  kNumerical,
  kUndefined,
  kUnreachable,
  kIo,
  kUnsupported,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Throws Error(kInvalidArgument) when `condition` is false.
void Require(bool condition, const std::string& message);

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t Mix64(std::uint64_t x);

// Combines a base seed with any number of integer keys.
template <typename... Keys>
std::uint64_t DeriveSeed(std::uint64_t base, Keys... keys) {
  std::uint64_t h = Mix64(base ^ 0x6a09e667f3bcc909ULL);
  ((h = Mix64(h ^ static_cast<std::uint64_t>(keys))), ...);
  return h;
}

std::uint64_t HashString(std::string_view s);

// 64-bit FNV-1a, rendered as 16 hex digits.
std::string Fnv1aHex(std::string_view bytes);

// Shortest round-trip decimal representation.
std::string FormatDouble(double value);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  void Reset() { start_ = std::chrono::steady_clock::now(); }
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  double Millis() const { return Seconds() * 1e3; }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Uniform double in [0, 1) with 53 random bits.
double Uniform01(Rng& rng);

// Unbiased integer in [0, n); n must be positive.
std::size_t UniformIndex(Rng& rng, std::size_t n);

// Fisher-Yates permutation of [0, n).
std::vector<std::size_t> Permutation(std::size_t n, Rng& rng);

}  // namespace ppxai

#endif  // PPXAI_COMMON_H_
