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

// Gaussian-copula generator for encoded tabular datasets, plus the
// validity / structure diagnostics applied to its output.
//
// Fitting works on source columns, not on encoded columns: a one-hot group
// is one categorical margin, so sampled rows always land on the simplex.

#ifndef PPXAI_COPULA_H_
#define PPXAI_COPULA_H_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppxai/common.h"
#include "ppxai/tabular_data.h"

namespace ppxai {

struct CopulaMargin {
  std::string name;
  ColumnKind kind = ColumnKind::kContinuous;
  bool is_target = false;
  // Continuous: order statistics of the fitted column (encoded units).
  std::vector<double> sorted_values;
  // Categorical / binary / target: probability of each category index.
  std::vector<double> frequencies;
  bool degenerate = false;
};

struct CopulaModel {
  std::vector<CopulaMargin> margins;  // feature groups in order, target last
  Matrix correlation;
  TabularDataset layout;  // zero-row dataset carrying the encoding
  double positive_rate = 0.0;
};

// Symmetric projection onto correlation matrices: eigenvalues clipped at
// `floor`, then rescaled to unit diagonal.
Matrix RepairCorrelation(const Matrix& c, double floor = 1e-6);

// Needs at least two rows. Constant columns become point masses.
CopulaModel FitCopula(const TabularDataset& ds);

// Draws `n` rows. When `training` is given, any sampled row equal to a
// training row (features and target) that has a non-constant continuous
// column is redrawn. Synthetic record ids start at kSyntheticIdBase.
inline constexpr RecordId kSyntheticIdBase = RecordId{1} << 40;
TabularDataset SampleCopula(const CopulaModel& model, std::size_t n, std::uint64_t seed,
                            const TabularDataset* training = nullptr);

struct DiagnosticScore {
  double data_validity = 0.0;
  double data_structure = 0.0;
  std::size_t checks_total = 0;
  std::size_t checks_passed = 0;
  std::vector<std::string> failures;
  double real_positive_rate = 0.0;
  double synth_positive_rate = 0.0;
};

// validity: fraction of passing (column, check) pairs over {type match, no
// missing, continuous within real [min, max], categories within the real
// observed set}; structure: 1 when column names and order agree, otherwise
// the fraction of matching positions.
DiagnosticScore Diagnostics(const TabularDataset& real, const TabularDataset& synth);

nlohmann::json ToJson(const CopulaModel& model);
CopulaModel CopulaFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const DiagnosticScore& score);

}  // namespace ppxai

#endif  // PPXAI_COPULA_H_
