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

#include "ppxai/tabular_data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <unordered_set>

#include "ppxai/csv.h"
#include "ppxai/stats.h"

namespace ppxai {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> ParseNumber(std::string_view s) {
  s = Trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool Compare(Criterion::Op op, double lhs, double rhs) {
  switch (op) {
    case Criterion::Op::kEq:
    case Criterion::Op::kIn:
      return lhs == rhs;
    case Criterion::Op::kNe:
      return lhs != rhs;
    case Criterion::Op::kLt:
      return lhs < rhs;
    case Criterion::Op::kLe:
      return lhs <= rhs;
    case Criterion::Op::kGt:
      return lhs > rhs;
    case Criterion::Op::kGe:
      return lhs >= rhs;
  }
  return false;
}

bool IsOrdering(Criterion::Op op) {
  return op == Criterion::Op::kLt || op == Criterion::Op::kLe || op == Criterion::Op::kGt ||
         op == Criterion::Op::kGe;
}

// Scales the continuous group `g` so that `lo` maps to 0 and `lo + range` to 1.
void RescaleGroup(TabularDataset& ds, FeatureGroup& g, double lo, double range) {
  auto col = ds.features.col(static_cast<Eigen::Index>(g.begin));
  if (range > 0.0) {
    col = (col.array() - lo) / range;
    g.offset += g.scale * lo;
    g.scale *= range;
  } else {
    col.setZero();
    g.offset += g.scale * lo;
  }
}

}  // namespace

std::string_view ToString(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kContinuous:
      return "continuous";
    case ColumnKind::kCategorical:
      return "categorical";
    case ColumnKind::kBinary:
      return "binary";
  }
  return "continuous";
}

std::string_view ToString(ColumnRole role) {
  switch (role) {
    case ColumnRole::kFeature:
      return "feature";
    case ColumnRole::kSensitive:
      return "sensitive";
    case ColumnRole::kTarget:
      return "target";
  }
  return "feature";
}

ColumnKind ParseColumnKind(std::string_view text) {
  if (text == "continuous") return ColumnKind::kContinuous;
  if (text == "categorical") return ColumnKind::kCategorical;
  if (text == "binary") return ColumnKind::kBinary;
  throw Error(ErrorCode::kInvalidArgument, "unknown column kind '" + std::string(text) + "'");
}

ColumnRole ParseColumnRole(std::string_view text) {
  if (text == "feature") return ColumnRole::kFeature;
  if (text == "sensitive") return ColumnRole::kSensitive;
  if (text == "target") return ColumnRole::kTarget;
  throw Error(ErrorCode::kInvalidArgument, "unknown column role '" + std::string(text) + "'");
}

Criterion::Criterion(Op op, std::vector<std::string> operands)
    : op_(op), operands_(std::move(operands)) {
  Require(!operands_.empty(), "criterion needs an operand");
  Require(op_ == Op::kIn || operands_.size() == 1, "only 'in' takes several operands");
  if (IsOrdering(op_)) {
    Require(ParseNumber(operands_[0]).has_value(),
            "ordering criterion needs a numeric operand, got '" + operands_[0] + "'");
  }
}

Criterion Criterion::Parse(std::string_view text) {
  text = Trim(text);
  struct Token {
    std::string_view symbol;
    Op op;
  };
  static constexpr Token kTokens[] = {{"==", Op::kEq}, {"!=", Op::kNe}, {"<=", Op::kLe},
                                      {">=", Op::kGe}, {"<", Op::kLt},  {">", Op::kGt},
                                      {"in ", Op::kIn}};
  for (const auto& token : kTokens) {
    if (text.substr(0, token.symbol.size()) != token.symbol) continue;
    std::string_view rest = Trim(text.substr(token.symbol.size()));
    Require(!rest.empty(), "criterion '" + std::string(text) + "' has no operand");
    std::vector<std::string> operands;
    if (token.op == Op::kIn) {
      std::size_t start = 0;
      while (start <= rest.size()) {
        const auto bar = rest.find('|', start);
        const auto piece = Trim(rest.substr(start, bar == std::string_view::npos ? rest.npos
                                                                                : bar - start));
        if (!piece.empty()) operands.emplace_back(piece);
        if (bar == std::string_view::npos) break;
        start = bar + 1;
      }
    } else {
      operands.emplace_back(rest);
    }
    return Criterion(token.op, std::move(operands));
  }
  throw Error(ErrorCode::kInvalidArgument, "cannot parse criterion '" + std::string(text) + "'");
}

bool Criterion::Holds(std::string_view cell) const {
  cell = Trim(cell);
  if (IsOrdering(op_)) {
    const auto value = ParseNumber(cell);
    return value.has_value() && Holds(*value);
  }
  const auto cell_number = ParseNumber(cell);
  bool any = false;
  for (const auto& operand : operands_) {
    const auto operand_number = ParseNumber(operand);
    const bool equal = (cell_number && operand_number) ? *cell_number == *operand_number
                                                       : cell == operand;
    any = any || equal;
  }
  return op_ == Op::kNe ? !any : any;
}

bool Criterion::Holds(double value) const {
  bool any = false;
  for (const auto& operand : operands_) {
    const auto rhs = ParseNumber(operand);
    if (!rhs) continue;
    if (op_ == Op::kNe) return value != *rhs;
    any = any || Compare(op_, value, *rhs);
  }
  return any;
}

std::string Criterion::ToString() const {
  std::string out;
  switch (op_) {
    case Op::kEq:
      out = "== ";
      break;
    case Op::kNe:
      out = "!= ";
      break;
    case Op::kLt:
      out = "< ";
      break;
    case Op::kLe:
      out = "<= ";
      break;
    case Op::kGt:
      out = "> ";
      break;
    case Op::kGe:
      out = ">= ";
      break;
    case Op::kIn:
      out = "in ";
      break;
  }
  for (std::size_t i = 0; i < operands_.size(); ++i) {
    if (i > 0) out += "|";
    out += operands_[i];
  }
  return out;
}

void DatasetSchema::Validate() const {
  std::set<std::string> names;
  int targets = 0;
  int sensitive = 0;
  for (const auto& c : columns) {
    if (!names.insert(c.name).second) {
      throw Error(ErrorCode::kSchemaMismatch, "duplicate column name '" + c.name + "'");
    }
    targets += c.role == ColumnRole::kTarget;
    sensitive += c.role == ColumnRole::kSensitive;
  }
  if (targets != 1) throw Error(ErrorCode::kSchemaMismatch, "schema needs exactly one target");
  if (sensitive < 1) throw Error(ErrorCode::kSchemaMismatch, "schema needs a sensitive column");
  Require(!target_positive.operands().empty(), "target criterion is not set");
}

const ColumnSchema& DatasetSchema::target() const {
  for (const auto& c : columns) {
    if (c.role == ColumnRole::kTarget) return c;
  }
  throw Error(ErrorCode::kSchemaMismatch, "schema has no target column");
}

std::optional<std::size_t> DatasetSchema::IndexOf(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t RawDataset::MissingCellCount() const {
  std::size_t count = 0;
  for (const auto& c : columns) count += std::count(c.missing.begin(), c.missing.end(), true);
  return count;
}

bool IsMissingToken(std::string_view cell) {
  const std::string lowered = Lower(Trim(cell));
  return lowered.empty() || lowered == "?" || lowered == "na" || lowered == "nan" ||
         lowered == "null";
}

RawDataset ParseCsv(std::string_view text, const DatasetSchema& schema) {
  schema.Validate();
  const csv::Table table = csv::Parse(text);

  std::vector<std::size_t> source(schema.columns.size());
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    const auto it = std::find_if(table.header.begin(), table.header.end(), [&](const auto& h) {
      return Trim(h) == schema.columns[c].name;
    });
    if (it == table.header.end()) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "column '" + schema.columns[c].name + "' not found in csv header");
    }
    source[c] = static_cast<std::size_t>(it - table.header.begin());
  }

  RawDataset raw;
  raw.schema = schema;
  raw.num_rows = table.rows.size();
  raw.columns.resize(schema.columns.size());
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    RawColumn& col = raw.columns[c];
    const bool numeric = schema.columns[c].kind == ColumnKind::kContinuous &&
                         schema.columns[c].role != ColumnRole::kTarget;
    col.missing.assign(raw.num_rows, false);
    if (numeric) {
      col.numeric.assign(raw.num_rows, 0.0);
    } else {
      col.text.assign(raw.num_rows, std::string());
    }
    for (std::size_t r = 0; r < raw.num_rows; ++r) {
      const auto& row = table.rows[r];
      if (row.size() != table.header.size()) {
        throw Error(ErrorCode::kIo, "csv row " + std::to_string(r + 1) + " has " +
                                        std::to_string(row.size()) + " fields, header has " +
                                        std::to_string(table.header.size()));
      }
      const std::string_view cell = row[source[c]];
      if (IsMissingToken(cell)) {
        col.missing[r] = true;
        continue;
      }
      if (numeric) {
        const auto value = ParseNumber(cell);
        if (value) {
          col.numeric[r] = *value;
        } else {
          col.missing[r] = true;
        }
      } else {
        col.text[r] = std::string(Trim(cell));
      }
    }
  }
  return raw;
}

RawDataset LoadCsv(const std::filesystem::path& path, const DatasetSchema& schema) {
  return ParseCsv(csv::ReadTextFile(path), schema);
}

const Labels& TabularDataset::SensitiveLabels(std::string_view attribute) const {
  const auto it = sensitive.find(std::string(attribute));
  if (it == sensitive.end()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "sensitive attribute '" + std::string(attribute) + "' not present");
  }
  return it->second;
}

const FeatureGroup* TabularDataset::FindGroup(std::string_view name) const {
  for (const auto& g : groups) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

void TabularDataset::Validate() const {
  const std::size_t n = size();
  if (target.size() != n || record_ids.size() != n) {
    throw Error(ErrorCode::kSchemaMismatch, "row counts of features/target/ids disagree");
  }
  for (const auto& [name, labels] : sensitive) {
    if (labels.size() != n) {
      throw Error(ErrorCode::kSchemaMismatch, "sensitive vector '" + name + "' has wrong length");
    }
  }
  if (feature_names.size() != num_features()) {
    throw Error(ErrorCode::kSchemaMismatch, "feature name count disagrees with matrix width");
  }
  if (!features.allFinite()) throw Error(ErrorCode::kNumerical, "non-finite feature value");
  for (const auto& g : groups) {
    if (g.kind != ColumnKind::kCategorical) continue;
    for (std::size_t r = 0; r < n; ++r) {
      const double sum = features.row(static_cast<Eigen::Index>(r))
                             .segment(static_cast<Eigen::Index>(g.begin),
                                      static_cast<Eigen::Index>(g.width))
                             .sum();
      // An all-zero row marks a category unseen by the reference encoding.
      if (sum != 1.0 && sum != 0.0) {
        throw Error(ErrorCode::kSchemaMismatch, "one-hot group '" + g.name + "' is malformed");
      }
    }
  }
  std::unordered_set<RecordId> ids(record_ids.begin(), record_ids.end());
  if (ids.size() != n) throw Error(ErrorCode::kSchemaMismatch, "duplicate record ids");
}

TabularDataset Preprocess(const RawDataset& raw, std::span<const SensitiveSpec> specs,
                          const TabularDataset* reference) {
  const DatasetSchema& schema = raw.schema;
  schema.Validate();

  for (const auto& spec : specs) {
    const auto idx = schema.IndexOf(spec.attribute_name);
    if (!idx) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "sensitive attribute '" + spec.attribute_name + "' is absent from the schema");
    }
    if (schema.columns[*idx].role != ColumnRole::kSensitive) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "column '" + spec.attribute_name + "' is not declared sensitive");
    }
  }

  std::vector<std::size_t> keep;
  keep.reserve(raw.num_rows);
  for (std::size_t r = 0; r < raw.num_rows; ++r) {
    bool ok = true;
    for (const auto& col : raw.columns) ok = ok && !col.missing[r];
    if (ok) keep.push_back(r);
  }
  if (keep.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "preprocessing dropped every row");
  }
  const std::size_t n = keep.size();

  TabularDataset ds;
  ds.columns = schema.columns;
  ds.target_name = schema.target().name;
  ds.sensitive_specs.assign(specs.begin(), specs.end());

  // Groups first, so the encoded width is known.
  std::size_t width = 0;
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    const ColumnSchema& cs = schema.columns[c];
    if (cs.role == ColumnRole::kTarget) continue;
    const RawColumn& col = raw.columns[c];
    FeatureGroup g;
    g.name = cs.name;
    g.kind = cs.kind;
    g.role = cs.role;
    g.begin = width;
    if (reference) {
      const FeatureGroup* ref = reference->FindGroup(cs.name);
      if (!ref || ref->kind != cs.kind) {
        throw Error(ErrorCode::kSchemaMismatch,
                    "reference encoding has no matching group for '" + cs.name + "'");
      }
      g.categories = ref->categories;
      g.offset = ref->offset;
      g.scale = ref->scale;
    } else if (cs.kind == ColumnKind::kContinuous) {
      double lo = col.numeric[keep[0]];
      double hi = lo;
      for (std::size_t r : keep) {
        lo = std::min(lo, col.numeric[r]);
        hi = std::max(hi, col.numeric[r]);
      }
      g.offset = lo;
      g.scale = hi > lo ? hi - lo : 1.0;
    } else {
      std::set<std::string> seen;
      for (std::size_t r : keep) seen.insert(col.text[r]);
      g.categories.assign(seen.begin(), seen.end());
      if (cs.kind == ColumnKind::kBinary && g.categories.size() > 2) {
        throw Error(ErrorCode::kSchemaMismatch,
                    "binary column '" + cs.name + "' has more than two values");
      }
    }
    g.width = cs.kind == ColumnKind::kCategorical ? g.categories.size() : 1;
    if (cs.kind == ColumnKind::kCategorical) {
      for (const auto& cat : g.categories) ds.feature_names.push_back(cs.name + "=" + cat);
    } else {
      ds.feature_names.push_back(cs.name);
    }
    width += g.width;
    ds.groups.push_back(std::move(g));
  }

  ds.features = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(width));
  for (const auto& g : ds.groups) {
    const RawColumn& col = raw.columns[*schema.IndexOf(g.name)];
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t r = keep[i];
      const auto row = static_cast<Eigen::Index>(i);
      if (g.kind == ColumnKind::kContinuous) {
        ds.features(row, static_cast<Eigen::Index>(g.begin)) = (col.numeric[r] - g.offset) / g.scale;
        continue;
      }
      const auto it = std::lower_bound(g.categories.begin(), g.categories.end(), col.text[r]);
      const bool known = it != g.categories.end() && *it == col.text[r];
      if (!known) continue;  // unseen category: all-zero one-hot row (or 0 for binary)
      const auto index = static_cast<std::size_t>(it - g.categories.begin());
      if (g.kind == ColumnKind::kCategorical) {
        ds.features(row, static_cast<Eigen::Index>(g.begin + index)) = 1.0;
      } else {
        ds.features(row, static_cast<Eigen::Index>(g.begin)) = static_cast<double>(index);
      }
    }
  }

  const std::size_t target_index = *schema.IndexOf(ds.target_name);
  const RawColumn& target_col = raw.columns[target_index];
  const bool numeric_target = !target_col.numeric.empty();
  ds.target.resize(n);
  ds.record_ids.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = keep[i];
    ds.target[i] = numeric_target ? schema.target_positive.Holds(target_col.numeric[r])
                                  : schema.target_positive.Holds(target_col.text[r]);
    ds.record_ids[i] = static_cast<RecordId>(r);
  }

  for (const auto& spec : specs) {
    const RawColumn& col = raw.columns[*schema.IndexOf(spec.attribute_name)];
    Labels labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t r = keep[i];
      labels[i] = col.numeric.empty() ? spec.positive.Holds(col.text[r])
                                      : spec.positive.Holds(col.numeric[r]);
    }
    ds.sensitive[spec.attribute_name] = std::move(labels);
  }
  return ds;
}

TabularDataset Preprocess(const TabularDataset& input) {
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < input.size(); ++r) {
    if (input.features.row(static_cast<Eigen::Index>(r)).allFinite()) keep.push_back(r);
  }
  if (keep.empty()) throw Error(ErrorCode::kInvalidArgument, "preprocessing dropped every row");
  TabularDataset ds = keep.size() == input.size() ? input : Subset(input, keep);
  for (auto& g : ds.groups) {
    if (g.kind != ColumnKind::kContinuous) continue;
    const auto col = ds.features.col(static_cast<Eigen::Index>(g.begin));
    const double lo = col.minCoeff();
    const double hi = col.maxCoeff();
    if (lo == 0.0 && hi == 1.0) continue;
    RescaleGroup(ds, g, lo, hi - lo);
  }
  return ds;
}

TabularDataset Subset(const TabularDataset& ds, std::span<const std::size_t> rows) {
  TabularDataset out;
  out.columns = ds.columns;
  out.target_name = ds.target_name;
  out.groups = ds.groups;
  out.feature_names = ds.feature_names;
  out.sensitive_specs = ds.sensitive_specs;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), ds.features.cols());
  out.target.resize(rows.size());
  out.record_ids.resize(rows.size());
  for (const auto& [name, labels] : ds.sensitive) out.sensitive[name].resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    Require(r < ds.size(), "subset row index out of range");
    out.features.row(static_cast<Eigen::Index>(i)) = ds.features.row(static_cast<Eigen::Index>(r));
    out.target[i] = ds.target[r];
    out.record_ids[i] = ds.record_ids[r];
    for (const auto& [name, labels] : ds.sensitive) out.sensitive[name][i] = labels[r];
  }
  return out;
}

double DecodeContinuous(const FeatureGroup& group, double encoded) {
  return group.offset + group.scale * encoded;
}

int DecodeCategory(const FeatureGroup& group, std::span<const double> row) {
  if (group.kind == ColumnKind::kBinary) {
    return static_cast<int>(std::lround(row[group.begin]));
  }
  for (std::size_t k = 0; k < group.width; ++k) {
    if (row[group.begin + k] > 0.5) return static_cast<int>(k);
  }
  return -1;
}

Labels DeriveSensitiveLabels(const TabularDataset& ds, const SensitiveSpec& spec) {
  const FeatureGroup* g = ds.FindGroup(spec.attribute_name);
  if (!g) {
    throw Error(ErrorCode::kSchemaMismatch,
                "sensitive attribute '" + spec.attribute_name + "' has no feature group");
  }
  Labels labels(ds.size());
  for (std::size_t r = 0; r < ds.size(); ++r) {
    const auto row_expr = ds.features.row(static_cast<Eigen::Index>(r));
    const std::span<const double> row(row_expr.data(), static_cast<std::size_t>(row_expr.size()));
    if (g->kind == ColumnKind::kContinuous) {
      labels[r] = spec.positive.Holds(DecodeContinuous(*g, row[g->begin]));
    } else {
      const int idx = DecodeCategory(*g, row);
      labels[r] = idx >= 0 && static_cast<std::size_t>(idx) < g->categories.size() &&
                  spec.positive.Holds(g->categories[static_cast<std::size_t>(idx)]);
    }
  }
  return labels;
}

SplitSizes ComputeSplitSizes(std::size_t n) {
  SplitSizes sizes;
  sizes.train = n * 67 / 100;
  const std::size_t rest = n - sizes.train;
  sizes.attack_train = rest / 2;
  sizes.attack_test = rest - sizes.attack_train;
  return sizes;
}

SplitBundle Split(const TabularDataset& ds, std::uint64_t seed) {
  Require(ds.size() >= 6, "split needs at least 6 records");
  const SplitSizes sizes = ComputeSplitSizes(ds.size());
  Rng rng(seed);
  const auto order = Permutation(ds.size(), rng);
  const std::span<const std::size_t> all(order);

  SplitBundle bundle;
  bundle.seed = seed;
  bundle.target_train = Subset(ds, all.subspan(0, sizes.train));
  bundle.aux_attack_train = Subset(ds, all.subspan(sizes.train, sizes.attack_train));
  bundle.aux_attack_test =
      Subset(ds, all.subspan(sizes.train + sizes.attack_train, sizes.attack_test));

  for (std::size_t gi = 0; gi < ds.groups.size(); ++gi) {
    if (ds.groups[gi].kind != ColumnKind::kContinuous) continue;
    const auto col = bundle.target_train.features.col(
        static_cast<Eigen::Index>(ds.groups[gi].begin));
    const double lo = col.minCoeff();
    const double range = col.maxCoeff() - lo;
    for (TabularDataset* part :
         {&bundle.target_train, &bundle.aux_attack_train, &bundle.aux_attack_test}) {
      RescaleGroup(*part, part->groups[gi], lo, range);
    }
  }
  return bundle;
}

std::vector<double> ColumnValues(const TabularDataset& ds, std::string_view column) {
  std::vector<double> values(ds.size());
  if (column == "target") {
    for (std::size_t i = 0; i < ds.size(); ++i) values[i] = ds.target[i];
    return values;
  }
  constexpr std::string_view kSensitive = "sensitive:";
  if (column.substr(0, kSensitive.size()) == kSensitive) {
    const Labels& labels = ds.SensitiveLabels(column.substr(kSensitive.size()));
    for (std::size_t i = 0; i < ds.size(); ++i) values[i] = labels[i];
    return values;
  }
  const auto it = std::find(ds.feature_names.begin(), ds.feature_names.end(), column);
  if (it == ds.feature_names.end()) {
    throw Error(ErrorCode::kSchemaMismatch, "unknown column '" + std::string(column) + "'");
  }
  const auto c = static_cast<Eigen::Index>(it - ds.feature_names.begin());
  for (std::size_t i = 0; i < ds.size(); ++i) values[i] = ds.features(static_cast<Eigen::Index>(i), c);
  return values;
}

double Pearson(const TabularDataset& ds, std::string_view col_a, std::string_view col_b) {
  return stats::Pearson(ColumnValues(ds, col_a), ColumnValues(ds, col_b));
}

std::vector<ScreeningRow> ScreenCorrelations(const TabularDataset& ds) {
  std::vector<ScreeningRow> rows;
  const auto target = ColumnValues(ds, "target");
  for (const auto& [attribute, labels] : ds.sensitive) {
    ScreeningRow row;
    row.attribute = attribute;
    const std::vector<double> s(labels.begin(), labels.end());
    row.vs_target = stats::Pearson(s, target);
    std::vector<double> coefficients;
    for (const auto& g : ds.groups) {
      if (g.role != ColumnRole::kFeature) continue;
      for (std::size_t k = 0; k < g.width; ++k) {
        const auto values = ColumnValues(ds, ds.feature_names[g.begin + k]);
        if (stats::Variance(values) <= 0.0) continue;
        coefficients.push_back(stats::Pearson(s, values));
      }
    }
    row.features_compared = coefficients.size();
    if (!coefficients.empty()) {
      row.vs_features_mean = stats::Mean(coefficients);
      row.vs_features_sd = std::sqrt(stats::Variance(coefficients));
      for (double c : coefficients) row.vs_features_max_abs = std::max(row.vs_features_max_abs, std::abs(c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ppxai
