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

// Simulated stand-ins for the Adult, Credit and Compas benchmarks. The
// column lists and sensitive-attribute criteria follow the public datasets;
// the rows are synthetic, with every sensitive attribute drawn independently
// of the other features.

#ifndef PPXAI_FIXTURES_H_
#define PPXAI_FIXTURES_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ppxai/tabular_data.h"

namespace ppxai {

struct Fixture {
  std::string name;
  DatasetSchema schema;
  std::vector<SensitiveSpec> sensitive;
};

Fixture AdultFixture();
Fixture CreditFixture();
Fixture CompasFixture();
// "adult", "credit" or "compas".
Fixture FixtureByName(std::string_view name);
std::vector<std::string> FixtureNames();

// CSV text with `complete_rows` rows free of missing cells. The Adult
// simulator also emits rows holding "?" cells, about 3% of the output.
std::string SimulateCsv(std::string_view name, std::size_t complete_rows, std::uint64_t seed);

// Parsed and preprocessed simulation.
TabularDataset SimulateDataset(std::string_view name, std::size_t complete_rows, std::uint64_t seed);

}  // namespace ppxai

#endif  // PPXAI_FIXTURES_H_
