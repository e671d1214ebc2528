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

#include "ppxai/explanation.h"

#include <charconv>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ppxai/csv.h"

namespace ppxai {

std::string_view ToString(ExplainerMethod method) {
  switch (method) {
    case ExplainerMethod::kIg:
      return "IG";
    case ExplainerMethod::kSg:
      return "SG";
    case ExplainerMethod::kShap:
      return "SHAP";
    case ExplainerMethod::kLime:
      return "LIME";
  }
  return "?";
}

ExplainerMethod ParseExplainerMethod(std::string_view text) {
  for (auto m : {ExplainerMethod::kIg, ExplainerMethod::kSg, ExplainerMethod::kShap, ExplainerMethod::kLime}) {
    if (text == ToString(m)) return m;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown explainer '" + std::string(text) + "'");
}

void ExplanationMatrix::Validate() const {
  if (record_ids.size() != size()) {
    throw Error(ErrorCode::kSchemaMismatch, "explanation rows and record ids disagree");
  }
  if (feature_names.size() != num_features()) {
    throw Error(ErrorCode::kSchemaMismatch, "explanation columns and feature names disagree");
  }
  if (!values.allFinite()) throw Error(ErrorCode::kNumerical, "explanation contains non-finite values");
  std::unordered_set<RecordId> seen(record_ids.begin(), record_ids.end());
  if (seen.size() != record_ids.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "explanation record ids are not unique");
  }
}

Matrix RowsFor(const ExplanationMatrix& m, std::span<const RecordId> ids) {
  std::unordered_map<RecordId, Eigen::Index> index;
  index.reserve(m.size());
  for (std::size_t r = 0; r < m.size(); ++r) index.emplace(m.record_ids[r], static_cast<Eigen::Index>(r));
  Matrix out(static_cast<Eigen::Index>(ids.size()), m.values.cols());
  for (std::size_t r = 0; r < ids.size(); ++r) {
    const auto it = index.find(ids[r]);
    if (it == index.end()) {
      throw Error(ErrorCode::kSchemaMismatch, "no explanation for record " + std::to_string(ids[r]));
    }
    out.row(static_cast<Eigen::Index>(r)) = m.values.row(it->second);
  }
  return out;
}

ExplanationMatrix Concatenate(const ExplanationMatrix& a, const ExplanationMatrix& b) {
  if (a.method != b.method || a.feature_names != b.feature_names || a.config_digest != b.config_digest) {
    throw Error(ErrorCode::kSchemaMismatch, "explanations come from different explainers");
  }
  ExplanationMatrix out = a;
  out.values.resize(a.values.rows() + b.values.rows(), a.values.cols());
  out.values << a.values, b.values;
  out.record_ids.insert(out.record_ids.end(), b.record_ids.begin(), b.record_ids.end());
  out.Validate();
  return out;
}

std::string ExplanationToCsv(const ExplanationMatrix& m) {
  std::ostringstream out;
  std::vector<std::string> row{"record_id"};
  row.insert(row.end(), m.feature_names.begin(), m.feature_names.end());
  csv::WriteRow(out, row);
  for (std::size_t r = 0; r < m.size(); ++r) {
    row.clear();
    row.push_back(std::to_string(m.record_ids[r]));
    for (std::size_t c = 0; c < m.num_features(); ++c) {
      row.push_back(FormatDouble(m.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))));
    }
    csv::WriteRow(out, row);
  }
  return out.str();
}

nlohmann::json ExplanationSidecar(const ExplanationMatrix& m) {
  return {{"format", "ppxai-explanation"},
          {"version", 1},
          {"method", std::string(ToString(m.method))},
          {"config_digest", m.config_digest},
          {"records", m.size()},
          {"features", m.num_features()},
          {"metadata", m.metadata}};
}

ExplanationMatrix ExplanationFromCsv(std::string_view csv_text, const nlohmann::json& sidecar) {
  ExplanationMatrix m;
  try {
    if (sidecar.value("format", "") != "ppxai-explanation") {
      throw Error(ErrorCode::kIo, "not an explanation sidecar");
    }
    if (sidecar.at("version").get<int>() != 1) {
      throw Error(ErrorCode::kUnsupported, "unsupported explanation version");
    }
    m.method = ParseExplainerMethod(sidecar.at("method").get<std::string>());
    m.config_digest = sidecar.at("config_digest").get<std::string>();
    m.metadata = sidecar.value("metadata", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIo, std::string("malformed explanation sidecar: ") + e.what());
  }
  const csv::Table table = csv::Parse(csv_text);
  if (table.header.empty() || table.header[0] != "record_id") {
    throw Error(ErrorCode::kSchemaMismatch, "explanation CSV must start with record_id");
  }
  m.feature_names.assign(table.header.begin() + 1, table.header.end());
  const std::size_t d = m.feature_names.size();
  m.values.resize(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(d));
  auto number = [](const std::string& cell, auto& out) {
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
      throw Error(ErrorCode::kIo, "bad number '" + cell + "' in explanation CSV");
    }
  };
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != d + 1) throw Error(ErrorCode::kIo, "ragged explanation row " + std::to_string(r + 1));
    RecordId id = 0;
    number(row[0], id);
    m.record_ids.push_back(id);
    for (std::size_t c = 0; c < d; ++c) {
      double v = 0.0;
      number(row[c + 1], v);
      m.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  m.Validate();
  return m;
}

std::filesystem::path SidecarPathFor(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".json");
  return p;
}

void SaveExplanation(const ExplanationMatrix& m, const std::filesystem::path& csv_path) {
  csv::WriteTextFile(csv_path, ExplanationToCsv(m));
  csv::WriteTextFile(SidecarPathFor(csv_path), ExplanationSidecar(m).dump(2) + "\n");
}

ExplanationMatrix LoadExplanation(const std::filesystem::path& csv_path) {
  nlohmann::json sidecar;
  try {
    sidecar = nlohmann::json::parse(csv::ReadTextFile(SidecarPathFor(csv_path)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIo, std::string("unreadable explanation sidecar: ") + e.what());
  }
  return ExplanationFromCsv(csv::ReadTextFile(csv_path), sidecar);
}

}  // namespace ppxai
