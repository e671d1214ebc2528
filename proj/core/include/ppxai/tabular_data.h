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

// Tabular ingestion: CSV loading against a declared schema, row-deletion of
// missing values, one-hot / min-max encoding, sensitive-attribute
// binarization, the 67/16.5/16.5 split and Pearson screening.

#ifndef PPXAI_TABULAR_DATA_H_
#define PPXAI_TABULAR_DATA_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppxai/common.h"

namespace ppxai {

enum class ColumnKind { kContinuous, kCategorical, kBinary };
enum class ColumnRole { kFeature, kSensitive, kTarget };

std::string_view ToString(ColumnKind kind);
std::string_view ToString(ColumnRole role);
ColumnKind ParseColumnKind(std::string_view text);
ColumnRole ParseColumnRole(std::string_view text);

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::kContinuous;
  ColumnRole role = ColumnRole::kFeature;

  friend bool operator==(const ColumnSchema&, const ColumnSchema&) = default;
};

// A predicate over one raw cell, written as "<op> <operand>":
//   "== Male", "!= Male", "< 40", ">= 40", "in White|Asian-Pac-Islander".
// Numeric comparisons parse the cell as a number; equality and membership
// compare trimmed text (or numbers, when both sides parse as numbers).
class Criterion {
 public:
  enum class Op { kEq, kNe, kLt, kLe, kGt, kGe, kIn };

  Criterion() = default;
  Criterion(Op op, std::vector<std::string> operands);

  static Criterion Parse(std::string_view text);

  bool Holds(std::string_view cell) const;
  bool Holds(double value) const;

  Op op() const { return op_; }
  const std::vector<std::string>& operands() const { return operands_; }
  std::string ToString() const;

  friend bool operator==(const Criterion&, const Criterion&) = default;

 private:
  Op op_ = Op::kEq;
  std::vector<std::string> operands_;
};

struct SensitiveSpec {
  std::string attribute_name;
  Criterion positive;

  friend bool operator==(const SensitiveSpec&, const SensitiveSpec&) = default;
};

struct DatasetSchema {
  std::vector<ColumnSchema> columns;
  Criterion target_positive;

  // Exactly one target, at least one sensitive column, unique names.
  void Validate() const;
  const ColumnSchema& target() const;
  std::optional<std::size_t> IndexOf(std::string_view name) const;
};

struct RawColumn {
  std::vector<double> numeric;    // continuous columns only
  std::vector<std::string> text;  // every other kind
  std::vector<bool> missing;
};

struct RawDataset {
  DatasetSchema schema;
  std::vector<RawColumn> columns;  // parallel to schema.columns
  std::size_t num_rows = 0;

  std::size_t MissingCellCount() const;
};

// True for "", "?", "NA", "NaN", "null" (case-insensitive, after trimming).
bool IsMissingToken(std::string_view cell);

RawDataset ParseCsv(std::string_view text, const DatasetSchema& schema);
RawDataset LoadCsv(const std::filesystem::path& path, const DatasetSchema& schema);

// One source column's span of encoded feature columns.
struct FeatureGroup {
  std::string name;
  ColumnKind kind = ColumnKind::kContinuous;
  ColumnRole role = ColumnRole::kFeature;
  std::size_t begin = 0;
  std::size_t width = 1;
  std::vector<std::string> categories;  // sorted; binary columns hold <= 2
  // Continuous columns: raw = offset + scale * encoded.
  double offset = 0.0;
  double scale = 1.0;

  friend bool operator==(const FeatureGroup&, const FeatureGroup&) = default;
};

struct TabularDataset {
  std::vector<ColumnSchema> columns;
  std::string target_name;
  std::vector<FeatureGroup> groups;
  std::vector<std::string> feature_names;
  std::vector<SensitiveSpec> sensitive_specs;
  Matrix features;
  Labels target;
  std::map<std::string, Labels> sensitive;
  std::vector<RecordId> record_ids;

  std::size_t size() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t num_features() const { return static_cast<std::size_t>(features.cols()); }
  bool empty() const { return size() == 0; }

  const Labels& SensitiveLabels(std::string_view attribute) const;
  const FeatureGroup* FindGroup(std::string_view name) const;

  // Row-count agreement, one-hot sums, finiteness, id uniqueness.
  void Validate() const;
};

// Rows with any missing cell are dropped; categoricals one-hot encoded with
// sorted vocabularies; binaries become one 0/1 column; continuous columns are
// min-max scaled to [0,1]; the target and each sensitive attribute are
// binarized by their criteria. Record ids are the raw row indices.
//
// With `reference`, its vocabularies and scaling are reused instead of
// fitted; unseen categories encode as an all-zero one-hot row.
TabularDataset Preprocess(const RawDataset& raw, std::span<const SensitiveSpec> specs,
                          const TabularDataset* reference = nullptr);

// Re-applies preprocessing to an already encoded dataset (drops non-finite
// rows, re-normalizes continuous columns). Identity on Preprocess output.
TabularDataset Preprocess(const TabularDataset& ds);

TabularDataset Subset(const TabularDataset& ds, std::span<const std::size_t> rows);

// Decoded (raw-unit) value of a continuous group, or category index of a
// categorical/binary group (-1 for an all-zero one-hot row).
double DecodeContinuous(const FeatureGroup& group, double encoded);
int DecodeCategory(const FeatureGroup& group, std::span<const double> row);

// Evaluates `spec` on the decoded value of its group for every row.
Labels DeriveSensitiveLabels(const TabularDataset& ds, const SensitiveSpec& spec);

struct SplitBundle {
  TabularDataset target_train;
  TabularDataset aux_attack_train;
  TabularDataset aux_attack_test;
  std::uint64_t seed = 0;
};

struct SplitSizes {
  std::size_t train = 0;
  std::size_t attack_train = 0;
  std::size_t attack_test = 0;
};

// train = floor(0.67 N); the remainder is halved with the floor going to
// attack-train and the ceiling to attack-test.
SplitSizes ComputeSplitSizes(std::size_t n);

// Uniform shuffle split (not stratified). Continuous columns of all three
// parts are re-scaled with training-part min/max.
SplitBundle Split(const TabularDataset& ds, std::uint64_t seed);

// Column reference for Pearson: an encoded feature name, "target", or
// "sensitive:<attribute>".
std::vector<double> ColumnValues(const TabularDataset& ds, std::string_view column);

double Pearson(const TabularDataset& ds, std::string_view col_a, std::string_view col_b);

struct ScreeningRow {
  std::string attribute;
  double vs_target = 0.0;
  double vs_features_mean = 0.0;
  double vs_features_sd = 0.0;
  double vs_features_max_abs = 0.0;
  std::size_t features_compared = 0;
};

// Correlation of every sensitive attribute with the target and with every
// non-sensitive encoded column (zero-variance columns are skipped).
std::vector<ScreeningRow> ScreenCorrelations(const TabularDataset& ds);

}  // namespace ppxai

#endif  // PPXAI_TABULAR_DATA_H_
