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

// On-disk form of encoded datasets: a CSV of encoded rows next to a
// schema.json that carries the encoding (groups, vocabularies, scaling).

#ifndef PPXAI_DATASET_IO_H_
#define PPXAI_DATASET_IO_H_

#include <filesystem>

#include <nlohmann/json.hpp>

#include "ppxai/tabular_data.h"

namespace ppxai {

nlohmann::json LayoutToJson(const TabularDataset& ds);
// Zero-row dataset with the encoding described by `j`.
TabularDataset LayoutFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const SensitiveSpec& spec);
SensitiveSpec SensitiveSpecFromJson(const nlohmann::json& j);

// Columns: record_id, every encoded feature, target, sensitive:<attr>...
std::string DatasetToCsv(const TabularDataset& ds);
TabularDataset DatasetFromCsv(std::string_view text, const TabularDataset& layout);

// Writes <stem>.csv and <stem>.schema.json.
void SaveDataset(const TabularDataset& ds, const std::filesystem::path& csv_path);
TabularDataset LoadDataset(const std::filesystem::path& csv_path);
std::filesystem::path SchemaPathFor(const std::filesystem::path& csv_path);

// Directory with target_train.csv, aux_attack_train.csv, aux_attack_test.csv.
void SaveSplit(const SplitBundle& split, const std::filesystem::path& dir);
SplitBundle LoadSplit(const std::filesystem::path& dir);

}  // namespace ppxai

#endif  // PPXAI_DATASET_IO_H_
