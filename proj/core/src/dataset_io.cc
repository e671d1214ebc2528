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

#include "ppxai/dataset_io.h"

#include <charconv>
#include <sstream>

#include "ppxai/csv.h"

namespace ppxai {
namespace {

constexpr std::string_view kSensitivePrefix = "sensitive:";

double ParseNumber(const std::string& cell, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw Error(ErrorCode::kIo, "bad number '" + cell + "' on row " + std::to_string(line));
  }
  return v;
}

}  // namespace

nlohmann::json ToJson(const SensitiveSpec& spec) {
  return {{"attribute", spec.attribute_name}, {"positive", spec.positive.ToString()}};
}

SensitiveSpec SensitiveSpecFromJson(const nlohmann::json& j) {
  return {j.at("attribute").get<std::string>(), Criterion::Parse(j.at("positive").get<std::string>())};
}

nlohmann::json LayoutToJson(const TabularDataset& ds) {
  nlohmann::json j;
  j["format"] = "ppxai-layout";
  j["version"] = 1;
  j["target"] = ds.target_name;
  auto& cols = j["columns"] = nlohmann::json::array();
  for (const auto& c : ds.columns) {
    cols.push_back({{"name", c.name}, {"kind", ToString(c.kind)}, {"role", ToString(c.role)}});
  }
  auto& groups = j["groups"] = nlohmann::json::array();
  for (const auto& g : ds.groups) {
    groups.push_back({{"name", g.name},
                      {"kind", ToString(g.kind)},
                      {"role", ToString(g.role)},
                      {"begin", g.begin},
                      {"width", g.width},
                      {"categories", g.categories},
                      {"offset", g.offset},
                      {"scale", g.scale}});
  }
  j["feature_names"] = ds.feature_names;
  auto& specs = j["sensitive"] = nlohmann::json::array();
  for (const auto& s : ds.sensitive_specs) specs.push_back(ToJson(s));
  return j;
}

TabularDataset LayoutFromJson(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "ppxai-layout") {
      throw Error(ErrorCode::kIo, "not a dataset layout");
    }
    if (j.at("version").get<int>() != 1) {
      throw Error(ErrorCode::kUnsupported, "unsupported layout version");
    }
    TabularDataset ds;
    ds.target_name = j.at("target").get<std::string>();
    for (const auto& c : j.at("columns")) {
      ds.columns.push_back({c.at("name").get<std::string>(),
                            ParseColumnKind(c.at("kind").get<std::string>()),
                            ParseColumnRole(c.at("role").get<std::string>())});
    }
    for (const auto& gj : j.at("groups")) {
      FeatureGroup g;
      g.name = gj.at("name").get<std::string>();
      g.kind = ParseColumnKind(gj.at("kind").get<std::string>());
      g.role = ParseColumnRole(gj.at("role").get<std::string>());
      g.begin = gj.at("begin").get<std::size_t>();
      g.width = gj.at("width").get<std::size_t>();
      g.categories = gj.at("categories").get<std::vector<std::string>>();
      g.offset = gj.at("offset").get<double>();
      g.scale = gj.at("scale").get<double>();
      ds.groups.push_back(std::move(g));
    }
    ds.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    for (const auto& s : j.at("sensitive")) ds.sensitive_specs.push_back(SensitiveSpecFromJson(s));
    ds.features = Matrix::Zero(0, static_cast<Eigen::Index>(ds.feature_names.size()));
    for (const auto& s : ds.sensitive_specs) ds.sensitive[s.attribute_name] = {};
    return ds;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIo, std::string("malformed layout: ") + e.what());
  }
}

std::string DatasetToCsv(const TabularDataset& ds) {
  std::ostringstream out;
  std::vector<std::string> row{"record_id"};
  row.insert(row.end(), ds.feature_names.begin(), ds.feature_names.end());
  row.push_back(ds.target_name);
  for (const auto& s : ds.sensitive_specs) row.push_back(std::string(kSensitivePrefix) + s.attribute_name);
  csv::WriteRow(out, row);
  for (std::size_t r = 0; r < ds.size(); ++r) {
    row.clear();
    row.push_back(std::to_string(ds.record_ids[r]));
    for (std::size_t c = 0; c < ds.num_features(); ++c) {
      row.push_back(FormatDouble(ds.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))));
    }
    row.push_back(std::to_string(ds.target[r]));
    for (const auto& s : ds.sensitive_specs) row.push_back(std::to_string(ds.sensitive.at(s.attribute_name)[r]));
    csv::WriteRow(out, row);
  }
  return out.str();
}

TabularDataset DatasetFromCsv(std::string_view text, const TabularDataset& layout) {
  const csv::Table table = csv::Parse(text);
  const std::size_t d = layout.feature_names.size();
  const std::size_t expected = 2 + d + layout.sensitive_specs.size();
  if (table.header.size() != expected || table.header[0] != "record_id") {
    throw Error(ErrorCode::kSchemaMismatch, "dataset header does not match its layout");
  }
  for (std::size_t c = 0; c < d; ++c) {
    if (table.header[1 + c] != layout.feature_names[c]) {
      throw Error(ErrorCode::kSchemaMismatch, "unexpected column '" + table.header[1 + c] + "'");
    }
  }
  TabularDataset ds = layout;
  const std::size_t n = table.rows.size();
  ds.features = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  ds.target.resize(n);
  ds.record_ids.resize(n);
  for (const auto& s : layout.sensitive_specs) ds.sensitive[s.attribute_name].assign(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = table.rows[r];
    if (row.size() != expected) throw Error(ErrorCode::kIo, "ragged row " + std::to_string(r + 1));
    ds.record_ids[r] = static_cast<RecordId>(ParseNumber(row[0], r + 1));
    for (std::size_t c = 0; c < d; ++c) {
      ds.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = ParseNumber(row[1 + c], r + 1);
    }
    ds.target[r] = static_cast<int>(ParseNumber(row[1 + d], r + 1));
    for (std::size_t k = 0; k < layout.sensitive_specs.size(); ++k) {
      ds.sensitive[layout.sensitive_specs[k].attribute_name][r] =
          static_cast<int>(ParseNumber(row[2 + d + k], r + 1));
    }
  }
  ds.Validate();
  return ds;
}

std::filesystem::path SchemaPathFor(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".schema.json");
  return p;
}

void SaveDataset(const TabularDataset& ds, const std::filesystem::path& csv_path) {
  csv::WriteTextFile(csv_path, DatasetToCsv(ds));
  csv::WriteTextFile(SchemaPathFor(csv_path), LayoutToJson(ds).dump(2) + "\n");
}

TabularDataset LoadDataset(const std::filesystem::path& csv_path) {
  nlohmann::json layout;
  try {
    layout = nlohmann::json::parse(csv::ReadTextFile(SchemaPathFor(csv_path)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIo, std::string("unreadable schema: ") + e.what());
  }
  return DatasetFromCsv(csv::ReadTextFile(csv_path), LayoutFromJson(layout));
}

void SaveSplit(const SplitBundle& split, const std::filesystem::path& dir) {
  SaveDataset(split.target_train, dir / "target_train.csv");
  SaveDataset(split.aux_attack_train, dir / "aux_attack_train.csv");
  SaveDataset(split.aux_attack_test, dir / "aux_attack_test.csv");
  csv::WriteTextFile(dir / "split.json", nlohmann::json{{"seed", split.seed}}.dump(2) + "\n");
}

SplitBundle LoadSplit(const std::filesystem::path& dir) {
  SplitBundle split;
  split.target_train = LoadDataset(dir / "target_train.csv");
  split.aux_attack_train = LoadDataset(dir / "aux_attack_train.csv");
  split.aux_attack_test = LoadDataset(dir / "aux_attack_test.csv");
  if (std::filesystem::exists(dir / "split.json")) {
    split.seed = nlohmann::json::parse(csv::ReadTextFile(dir / "split.json")).value("seed", std::uint64_t{0});
  }
  return split;
}

}  // namespace ppxai
