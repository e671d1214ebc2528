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

// Dense feed-forward binary classifier with hand-written backpropagation.
// Both the audited target model and the adversary's attack model are
// instances of MlpModel.

#ifndef PPXAI_MLP_H_
#define PPXAI_MLP_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppxai/common.h"
#include "ppxai/tabular_data.h"

namespace ppxai {

enum class Activation { kRelu, kSigmoid, kIdentity };

std::string_view ToString(Activation activation);
Activation ParseActivation(std::string_view text);

struct LayerSpec {
  std::size_t width = 1;
  Activation activation = Activation::kRelu;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

// Named architectures: "default" (40-40 ReLU), "hospital"
// (1024-512-256-128 ReLU) and "attack" (64-128-32 ReLU). Each ends in a
// width-1 sigmoid unit.
std::vector<LayerSpec> ArchitectureProfile(std::string_view name);

// Hidden ReLU layers of the given widths followed by the sigmoid output.
std::vector<LayerSpec> ReluClassifier(std::span<const std::size_t> hidden);

class MlpModel {
 public:
  MlpModel() = default;
  // All parameters zero. The last layer must have width 1 and a sigmoid or
  // identity activation.
  MlpModel(std::size_t input_dim, std::vector<LayerSpec> layers);

  std::size_t input_dim() const { return input_dim_; }
  const std::vector<LayerSpec>& layers() const { return layers_; }
  std::size_t num_layers() const { return layers_.size(); }
  std::size_t num_parameters() const { return static_cast<std::size_t>(params_.size()); }
  bool has_sigmoid_output() const;

  // Flat parameter vector: per layer, the row-major (out x in) weight matrix
  // followed by the bias vector.
  const Vector& parameters() const { return params_; }
  Vector& parameters() { return params_; }

  Eigen::Map<const Matrix> Weights(std::size_t layer) const;
  Eigen::Map<Matrix> Weights(std::size_t layer);
  Eigen::Map<const Vector> Bias(std::size_t layer) const;
  Eigen::Map<Vector> Bias(std::size_t layer);

  // Positive-class output (probability for a sigmoid head).
  double Predict(std::span<const double> x) const;
  Vector Predict(const Matrix& x) const;

  // d output / d x, evaluated analytically.
  Vector InputGradient(std::span<const double> x) const;
  Matrix InputGradients(const Matrix& x) const;

  // Mean binary cross-entropy over the rows of `x`, plus the optional
  // 0.5 * l2 * ||W||^2 / rows penalty. Writes d loss / d parameters to `grad`
  // when non-null.
  double Loss(const Matrix& x, std::span<const int> y, double l2, Vector* grad) const;

  std::uint64_t seed() const { return seed_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  friend bool operator==(const MlpModel&, const MlpModel&) = default;

 private:
  struct Forward {
    std::vector<Matrix> pre;   // pre-activations per layer
    std::vector<Matrix> post;  // post[0] = input, post[l + 1] = layer l output
  };
  Forward Run(const Matrix& x) const;
  void CheckInput(std::size_t dim) const;

  std::size_t input_dim_ = 0;
  std::vector<LayerSpec> layers_;
  std::vector<std::size_t> offsets_;
  Vector params_;
  std::uint64_t seed_ = 0;
};

enum class WeightInit {
  kHe,       // He-uniform for ReLU layers, Glorot-uniform otherwise, zero biases
  kGlorot,   // Glorot-uniform weights and biases; bound shrunk by sqrt(3) before a sigmoid
};

MlpModel InitModel(std::size_t input_dim, std::vector<LayerSpec> layers, std::uint64_t seed,
                   WeightInit scheme = WeightInit::kHe);

class AdamOptimizer {
 public:
  explicit AdamOptimizer(double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
                         double epsilon = 1e-8);
  void Step(Vector& params, const Vector& grad);
  std::int64_t steps() const { return t_; }

 private:
  double lr_;
  double beta1_;
  double beta2_;
  double epsilon_;
  std::int64_t t_ = 0;
  Vector m_;
  Vector v_;
};

struct TrainConfig {
  int epochs = 50;
  double learning_rate = 1e-3;
  std::size_t batch_size = 48;
  double l2 = 0.0;
  // Stop once the epoch loss has failed to improve on the best loss by more
  // than this amount for `no_change_epochs` consecutive epochs; 0 disables.
  double early_stop_tolerance = 0.0;
  int no_change_epochs = 10;

  void Validate(std::size_t num_rows) const;
};

struct TrainResult {
  MlpModel model;
  std::vector<double> loss_history;
  double seconds = 0.0;
};

// Mini-batch Adam on binary cross-entropy, reshuffled every epoch.
// Deterministic given `seed`. Throws Error(kNumerical) on a NaN loss.
TrainResult Train(const MlpModel& init, const Matrix& x, const Labels& y, const TrainConfig& cfg,
                  std::uint64_t seed);
TrainResult Train(const MlpModel& init, const TabularDataset& ds, const TrainConfig& cfg,
                  std::uint64_t seed);

// Output >= 0.5 is class 1.
Labels PredictLabels(const MlpModel& model, const Matrix& x);
double Evaluate(const MlpModel& model, const Matrix& x, const Labels& y);
double Evaluate(const MlpModel& model, const TabularDataset& ds);

// Text format "ppxai-mlp 1": header lines, then one parameter per line.
std::string SerializeModel(const MlpModel& model);
MlpModel ParseModel(std::string_view text);
void SaveModel(const MlpModel& model, const std::filesystem::path& path);
MlpModel LoadModel(const std::filesystem::path& path);
std::string ModelHash(const MlpModel& model);

}  // namespace ppxai

#endif  // PPXAI_MLP_H_
