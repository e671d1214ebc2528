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

#ifndef PPXAI_CSV_H_
#define PPXAI_CSV_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ppxai::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC-4180 reader: quoted fields, doubled quotes, embedded separators and
// newlines, CRLF or LF line endings. The first record is the header.
Table Parse(std::string_view text);
Table ReadFile(const std::filesystem::path& path);

std::string Escape(std::string_view field);

void WriteRow(std::ostream& out, const std::vector<std::string>& fields);

// Writes `contents` atomically enough for batch use: to a sibling temp file,
// then renames. Throws Error(kIo) on failure.
void WriteTextFile(const std::filesystem::path& path, std::string_view contents);
std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace ppxai::csv

#endif  // PPXAI_CSV_H_
