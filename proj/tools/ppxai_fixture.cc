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

// ppxai_fixture: writes simulated CSV files with the built-in dataset schemas.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ppxai/csv.h"
#include "ppxai/fixtures.h"

int main(int argc, char** argv) {
  CLI::App app{"Write a simulated dataset CSV"};
  std::string name;
  std::size_t rows = 2000;
  std::uint64_t seed = 0;
  std::string out;
  app.add_option("--fixture", name, "adult, credit or compas")->required();
  app.add_option("--rows", rows, "Complete rows");
  app.add_option("--seed", seed);
  app.add_option("--out", out)->required();
  CLI11_PARSE(app, argc, argv);
  try {
    ppxai::csv::WriteTextFile(out, ppxai::SimulateCsv(name, rows, seed));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
