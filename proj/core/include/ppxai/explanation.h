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

#ifndef PPXAI_EXPLANATION_H_
#define PPXAI_EXPLANATION_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppxai/common.h"

namespace ppxai {

enum class ExplainerMethod { kIg, kSg, kShap, kLime };

// "IG", "SG", "SHAP", "LIME".
std::string_view ToString(ExplainerMethod method);
ExplainerMethod ParseExplainerMethod(std::string_view text);

// One attribution row per record, one column per encoded feature.
struct ExplanationMatrix {
  ExplainerMethod method = ExplainerMethod::kIg;
  std::vector<std::string> feature_names;
  Matrix values;
  std::vector<RecordId> record_ids;
  std::string config_digest;
  // Free-form sidecar content: timing, noise spec, per-column scales.
  nlohmann::json metadata = nlohmann::json::object();

  std::size_t size() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t num_features() const { return static_cast<std::size_t>(values.cols()); }

  // Shape agreement, finite values, unique record ids.
  void Validate() const;
};

// Rows of `m` for `ids`, in that order. Unknown ids throw kSchemaMismatch.
Matrix RowsFor(const ExplanationMatrix& m, std::span<const RecordId> ids);

// Row-wise concatenation; method, feature names and digest must agree.
ExplanationMatrix Concatenate(const ExplanationMatrix& a, const ExplanationMatrix& b);

std::string ExplanationToCsv(const ExplanationMatrix& m);
nlohmann::json ExplanationSidecar(const ExplanationMatrix& m);
ExplanationMatrix ExplanationFromCsv(std::string_view csv_text, const nlohmann::json& sidecar);

// <path> gets the CSV, <path minus .csv>.json the sidecar.
void SaveExplanation(const ExplanationMatrix& m, const std::filesystem::path& csv_path);
ExplanationMatrix LoadExplanation(const std::filesystem::path& csv_path);
std::filesystem::path SidecarPathFor(const std::filesystem::path& csv_path);

}  // namespace ppxai

#endif  // PPXAI_EXPLANATION_H_
