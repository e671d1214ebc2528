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

#include "ppxai/mlp.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "ppxai/csv.h"

namespace ppxai {
namespace {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double Softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void Activate(Activation a, Matrix& z) {
  switch (a) {
    case Activation::kRelu:
      z = z.cwiseMax(0.0);
      break;
    case Activation::kSigmoid:
      z = z.unaryExpr([](double v) { return Sigmoid(v); });
      break;
    case Activation::kIdentity:
      break;
  }
}

// Multiplies `upstream` in place by the activation derivative, expressed
// through the pre-activation `pre` and the activation output `post`.
void ApplyDerivative(Activation a, const Matrix& pre, const Matrix& post, Matrix& upstream) {
  switch (a) {
    case Activation::kRelu:
      upstream.array() *= (pre.array() > 0.0).cast<double>();
      break;
    case Activation::kSigmoid:
      upstream.array() *= post.array() * (1.0 - post.array());
      break;
    case Activation::kIdentity:
      break;
  }
}

Matrix RowMatrix(std::span<const double> x) {
  return Eigen::Map<const Matrix>(x.data(), 1, static_cast<Eigen::Index>(x.size()));
}

}  // namespace

std::string_view ToString(Activation activation) {
  switch (activation) {
    case Activation::kRelu:
      return "relu";
    case Activation::kSigmoid:
      return "sigmoid";
    case Activation::kIdentity:
      return "identity";
  }
  return "relu";
}

Activation ParseActivation(std::string_view text) {
  if (text == "relu") return Activation::kRelu;
  if (text == "sigmoid") return Activation::kSigmoid;
  if (text == "identity") return Activation::kIdentity;
  throw Error(ErrorCode::kInvalidArgument, "unknown activation '" + std::string(text) + "'");
}

std::vector<LayerSpec> ReluClassifier(std::span<const std::size_t> hidden) {
  std::vector<LayerSpec> layers;
  for (std::size_t w : hidden) layers.push_back({w, Activation::kRelu});
  layers.push_back({1, Activation::kSigmoid});
  return layers;
}

std::vector<LayerSpec> ArchitectureProfile(std::string_view name) {
  if (name == "default") {
    const std::size_t hidden[] = {40, 40};
    return ReluClassifier(hidden);
  }
  if (name == "hospital") {
    const std::size_t hidden[] = {1024, 512, 256, 128};
    return ReluClassifier(hidden);
  }
  if (name == "attack") {
    const std::size_t hidden[] = {64, 128, 32};
    return ReluClassifier(hidden);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown architecture '" + std::string(name) + "'");
}

MlpModel::MlpModel(std::size_t input_dim, std::vector<LayerSpec> layers)
    : input_dim_(input_dim), layers_(std::move(layers)) {
  Require(input_dim_ >= 1, "model input dimension must be positive");
  Require(!layers_.empty(), "model needs at least one layer");
  Require(layers_.back().width == 1, "last layer must have width 1");
  Require(layers_.back().activation != Activation::kRelu,
          "last layer must be sigmoid or identity");
  std::size_t fan_in = input_dim_;
  std::size_t offset = 0;
  for (const auto& layer : layers_) {
    Require(layer.width >= 1, "layer width must be positive");
    offsets_.push_back(offset);
    offset += layer.width * fan_in + layer.width;
    fan_in = layer.width;
  }
  params_ = Vector::Zero(static_cast<Eigen::Index>(offset));
}

bool MlpModel::has_sigmoid_output() const {
  return !layers_.empty() && layers_.back().activation == Activation::kSigmoid;
}

Eigen::Map<const Matrix> MlpModel::Weights(std::size_t l) const {
  const std::size_t in = l == 0 ? input_dim_ : layers_[l - 1].width;
  return {params_.data() + offsets_[l], static_cast<Eigen::Index>(layers_[l].width),
          static_cast<Eigen::Index>(in)};
}

Eigen::Map<Matrix> MlpModel::Weights(std::size_t l) {
  const std::size_t in = l == 0 ? input_dim_ : layers_[l - 1].width;
  return {params_.data() + offsets_[l], static_cast<Eigen::Index>(layers_[l].width),
          static_cast<Eigen::Index>(in)};
}

Eigen::Map<const Vector> MlpModel::Bias(std::size_t l) const {
  const std::size_t in = l == 0 ? input_dim_ : layers_[l - 1].width;
  return {params_.data() + offsets_[l] + layers_[l].width * in,
          static_cast<Eigen::Index>(layers_[l].width)};
}

Eigen::Map<Vector> MlpModel::Bias(std::size_t l) {
  const std::size_t in = l == 0 ? input_dim_ : layers_[l - 1].width;
  return {params_.data() + offsets_[l] + layers_[l].width * in,
          static_cast<Eigen::Index>(layers_[l].width)};
}

void MlpModel::CheckInput(std::size_t dim) const {
  if (dim != input_dim_) {
    throw Error(ErrorCode::kSchemaMismatch, "input has " + std::to_string(dim) +
                                                 " features, model expects " +
                                                 std::to_string(input_dim_));
  }
}

MlpModel::Forward MlpModel::Run(const Matrix& x) const {
  CheckInput(static_cast<std::size_t>(x.cols()));
  Forward f;
  f.post.reserve(layers_.size() + 1);
  f.pre.reserve(layers_.size());
  f.post.push_back(x);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Matrix z = f.post.back() * Weights(l).transpose();
    z.rowwise() += Bias(l).transpose();
    Matrix a = z;
    Activate(layers_[l].activation, a);
    f.pre.push_back(std::move(z));
    f.post.push_back(std::move(a));
  }
  return f;
}

double MlpModel::Predict(std::span<const double> x) const {
  CheckInput(x.size());
  Vector a = Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size()));
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Vector z = Weights(l) * a + Bias(l);
    switch (layers_[l].activation) {
      case Activation::kRelu:
        a = z.cwiseMax(0.0);
        break;
      case Activation::kSigmoid:
        a = z.unaryExpr([](double v) { return Sigmoid(v); });
        break;
      case Activation::kIdentity:
        a = std::move(z);
        break;
    }
  }
  return a(0);
}

Vector MlpModel::Predict(const Matrix& x) const {
  if (x.rows() == 0) return Vector();
  return Run(x).post.back().col(0);
}

Matrix MlpModel::InputGradients(const Matrix& x) const {
  const Forward f = Run(x);
  Matrix upstream = Matrix::Ones(x.rows(), 1);
  for (std::size_t l = layers_.size(); l-- > 0;) {
    ApplyDerivative(layers_[l].activation, f.pre[l], f.post[l + 1], upstream);
    upstream = upstream * Weights(l);
  }
  return upstream;
}

Vector MlpModel::InputGradient(std::span<const double> x) const {
  CheckInput(x.size());
  return InputGradients(RowMatrix(x)).row(0).transpose();
}

double MlpModel::Loss(const Matrix& x, std::span<const int> y, double l2, Vector* grad) const {
  Require(has_sigmoid_output(), "cross-entropy needs a sigmoid output layer");
  Require(static_cast<std::size_t>(x.rows()) == y.size(), "labels and rows disagree");
  Require(x.rows() > 0, "loss over an empty batch");
  const Forward f = Run(x);
  const auto n = static_cast<double>(x.rows());
  const Matrix& logits = f.pre.back();
  double loss = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double z = logits(i, 0);
    loss += Softplus(z) - static_cast<double>(y[static_cast<std::size_t>(i)]) * z;
  }
  loss /= n;
  if (l2 > 0.0) {
    double sq = 0.0;
    for (std::size_t l = 0; l < layers_.size(); ++l) sq += Weights(l).squaredNorm();
    loss += 0.5 * l2 * sq / n;
  }
  if (grad == nullptr) return loss;

  grad->setZero(params_.size());
  Matrix delta(x.rows(), 1);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    delta(i, 0) = (f.post.back()(i, 0) - static_cast<double>(y[static_cast<std::size_t>(i)])) / n;
  }
  for (std::size_t l = layers_.size(); l-- > 0;) {
    if (l + 1 < layers_.size()) ApplyDerivative(layers_[l].activation, f.pre[l], f.post[l + 1], delta);
    const std::size_t in = l == 0 ? input_dim_ : layers_[l - 1].width;
    Eigen::Map<Matrix> dw(grad->data() + offsets_[l], static_cast<Eigen::Index>(layers_[l].width),
                          static_cast<Eigen::Index>(in));
    Eigen::Map<Vector> db(grad->data() + offsets_[l] + layers_[l].width * in,
                          static_cast<Eigen::Index>(layers_[l].width));
    dw.noalias() = delta.transpose() * f.post[l];
    db = delta.colwise().sum().transpose();
    if (l2 > 0.0) dw += (l2 / n) * Weights(l);
    if (l > 0) delta = delta * Weights(l);
  }
  return loss;
}

MlpModel InitModel(std::size_t input_dim, std::vector<LayerSpec> layers, std::uint64_t seed,
                   WeightInit scheme) {
  MlpModel model(input_dim, std::move(layers));
  model.set_seed(seed);
  Rng rng(seed);
  std::size_t fan_in = input_dim;
  for (std::size_t l = 0; l < model.num_layers(); ++l) {
    const LayerSpec& spec = model.layers()[l];
    const auto fan_sum = static_cast<double>(fan_in + spec.width);
    double limit = 0.0;
    if (scheme == WeightInit::kHe) {
      limit = spec.activation == Activation::kRelu ? std::sqrt(6.0 / static_cast<double>(fan_in))
                                                   : std::sqrt(6.0 / fan_sum);
    } else {
      limit = std::sqrt((spec.activation == Activation::kSigmoid ? 2.0 : 6.0) / fan_sum);
    }
    auto w = model.Weights(l);
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = (2.0 * Uniform01(rng) - 1.0) * limit;
    }
    if (scheme == WeightInit::kGlorot) {
      auto b = model.Bias(l);
      for (Eigen::Index r = 0; r < b.size(); ++r) b(r) = (2.0 * Uniform01(rng) - 1.0) * limit;
    }
    fan_in = spec.width;
  }
  return model;
}

AdamOptimizer::AdamOptimizer(double learning_rate, double beta1, double beta2, double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {}

void AdamOptimizer::Step(Vector& params, const Vector& grad) {
  if (m_.size() != params.size()) {
    m_ = Vector::Zero(params.size());
    v_ = Vector::Zero(params.size());
  }
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  params.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + epsilon_);
}

void TrainConfig::Validate(std::size_t num_rows) const {
  Require(epochs >= 1, "epochs must be >= 1");
  Require(learning_rate > 0.0, "learning rate must be positive");
  Require(batch_size >= 1 && batch_size <= num_rows,
          "batch size must lie in [1, rows], got " + std::to_string(batch_size));
  Require(l2 >= 0.0, "l2 must be non-negative");
}

TrainResult Train(const MlpModel& init, const Matrix& x, const Labels& y, const TrainConfig& cfg,
                  std::uint64_t seed) {
  Require(x.rows() > 0, "training set is empty");
  Require(static_cast<std::size_t>(x.rows()) == y.size(), "labels and rows disagree");
  const auto n = static_cast<std::size_t>(x.rows());
  cfg.Validate(n);

  Stopwatch timer;
  TrainResult result{init, {}, 0.0};
  MlpModel& model = result.model;
  AdamOptimizer adam(cfg.learning_rate);
  Rng rng(seed);
  Vector grad;
  Matrix xb;
  Labels yb;
  double best = std::numeric_limits<double>::infinity();
  int stale = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto order = Permutation(n, rng);
    double total = 0.0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t m = std::min(cfg.batch_size, n - start);
      xb.resize(static_cast<Eigen::Index>(m), x.cols());
      yb.resize(m);
      for (std::size_t i = 0; i < m; ++i) {
        xb.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(order[start + i]));
        yb[i] = y[order[start + i]];
      }
      const double loss = model.Loss(xb, yb, cfg.l2, &grad);
      if (!std::isfinite(loss) || !grad.allFinite()) {
        throw Error(ErrorCode::kNumerical,
                    "non-finite loss at epoch " + std::to_string(epoch) + ", batch offset " +
                        std::to_string(start) + " (learning rate " +
                        FormatDouble(cfg.learning_rate) + ")");
      }
      total += loss * static_cast<double>(m);
      adam.Step(model.parameters(), grad);
    }
    const double epoch_loss = total / static_cast<double>(n);
    result.loss_history.push_back(epoch_loss);
    if (cfg.early_stop_tolerance > 0.0) {
      if (epoch_loss > best - cfg.early_stop_tolerance) {
        if (++stale >= cfg.no_change_epochs) break;
      } else {
        stale = 0;
      }
      best = std::min(best, epoch_loss);
    }
  }
  result.seconds = timer.Seconds();
  return result;
}

TrainResult Train(const MlpModel& init, const TabularDataset& ds, const TrainConfig& cfg,
                  std::uint64_t seed) {
  return Train(init, ds.features, ds.target, cfg, seed);
}

Labels PredictLabels(const MlpModel& model, const Matrix& x) {
  const Vector p = model.Predict(x);
  Labels labels(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) labels[static_cast<std::size_t>(i)] = p(i) >= 0.5;
  return labels;
}

double Evaluate(const MlpModel& model, const Matrix& x, const Labels& y) {
  Require(x.rows() > 0, "evaluation set is empty");
  const Labels predicted = PredictLabels(model, x);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < y.size(); ++i) correct += predicted[i] == y[i];
  return static_cast<double>(correct) / static_cast<double>(y.size());
}

double Evaluate(const MlpModel& model, const TabularDataset& ds) {
  return Evaluate(model, ds.features, ds.target);
}

std::string SerializeModel(const MlpModel& model) {
  std::ostringstream out;
  out << "ppxai-mlp 1\n";
  out << "input_dim " << model.input_dim() << "\n";
  out << "seed " << model.seed() << "\n";
  out << "layers " << model.num_layers() << "\n";
  for (const auto& layer : model.layers()) out << layer.width << " " << ToString(layer.activation) << "\n";
  out << "parameters " << model.num_parameters() << "\n";
  for (Eigen::Index i = 0; i < model.parameters().size(); ++i) {
    out << FormatDouble(model.parameters()(i)) << "\n";
  }
  return out.str();
}

MlpModel ParseModel(std::string_view text) {
  std::istringstream in{std::string(text)};
  auto expect = [&](const std::string& keyword) {
    std::string word;
    if (!(in >> word) || word != keyword) {
      throw Error(ErrorCode::kIo, "model file: expected '" + keyword + "', got '" + word + "'");
    }
  };
  expect("ppxai-mlp");
  int version = 0;
  in >> version;
  if (version != 1) throw Error(ErrorCode::kUnsupported, "model file version " + std::to_string(version));
  std::size_t input_dim = 0, num_layers = 0, num_params = 0;
  std::uint64_t seed = 0;
  expect("input_dim");
  in >> input_dim;
  expect("seed");
  in >> seed;
  expect("layers");
  in >> num_layers;
  std::vector<LayerSpec> layers(num_layers);
  for (auto& layer : layers) {
    std::string activation;
    in >> layer.width >> activation;
    layer.activation = ParseActivation(activation);
  }
  expect("parameters");
  in >> num_params;
  if (!in) throw Error(ErrorCode::kIo, "model file: truncated header");
  MlpModel model(input_dim, std::move(layers));
  model.set_seed(seed);
  if (num_params != model.num_parameters()) {
    throw Error(ErrorCode::kIo, "model file: parameter count does not match the architecture");
  }
  for (std::size_t i = 0; i < num_params; ++i) {
    std::string token;
    if (!(in >> token)) throw Error(ErrorCode::kIo, "model file: truncated parameters");
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw Error(ErrorCode::kIo, "model file: bad parameter '" + token + "'");
    }
    model.parameters()(static_cast<Eigen::Index>(i)) = value;
  }
  return model;
}

void SaveModel(const MlpModel& model, const std::filesystem::path& path) {
  csv::WriteTextFile(path, SerializeModel(model));
}

MlpModel LoadModel(const std::filesystem::path& path) { return ParseModel(csv::ReadTextFile(path)); }

std::string ModelHash(const MlpModel& model) { return Fnv1aHex(SerializeModel(model)); }

}  // namespace ppxai
