// Copyright 2026 The FairRide Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace fairride::csv {

// Minimal comma-separated reader for the project's input tables. Supports
// double-quoted fields with "" escapes; no embedded newlines.
class Table {
 public:
  // Reads the whole stream. The first non-empty line must equal
  // `expected_header` (column names, whitespace-trimmed).
  static Table parse(std::istream& in, std::string source_name,
                     const std::vector<std::string>& expected_header);
  static Table read_file(const std::string& path,
                         const std::vector<std::string>& expected_header);

  struct Row {
    std::size_t line = 0;  // 1-based line in the source
    std::vector<std::string> fields;
  };

  const std::string& source() const { return source_; }
  const std::vector<Row>& rows() const { return rows_; }

 private:
  std::string source_;
  std::vector<Row> rows_;
};

std::vector<std::string> split_line(std::string_view line);

// Field conversions; each throws RowError naming the column on failure.
std::int64_t to_int(const Table& t, const Table::Row& row, std::size_t col,
                    std::string_view name);
double to_double(const Table& t, const Table::Row& row, std::size_t col,
                 std::string_view name);

}  // namespace fairride::csv
