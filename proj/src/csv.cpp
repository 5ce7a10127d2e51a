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

#include "fairride/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "fairride/types.hpp"

namespace fairride::csv {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      out.emplace_back(was_quoted ? field : std::string(trim(field)));
      field.clear();
      was_quoted = false;
    } else {
      field.push_back(c);
    }
  }
  out.emplace_back(was_quoted ? field : std::string(trim(field)));
  return out;
}

Table Table::parse(std::istream& in, std::string source_name,
                   const std::vector<std::string>& expected_header) {
  Table t;
  t.source_ = std::move(source_name);
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    if (trim(line).empty()) continue;
    auto fields = split_line(line);
    if (!have_header) {
      if (fields != expected_header) {
        std::string want;
        for (const auto& h : expected_header) want += (want.empty() ? "" : ",") + h;
        throw RowError(t.source_, lineno, "expected header '" + want + "'");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != expected_header.size()) {
      throw RowError(t.source_, lineno,
                     "expected " + std::to_string(expected_header.size()) +
                         " fields, got " + std::to_string(fields.size()));
    }
    t.rows_.push_back(Row{lineno, std::move(fields)});
  }
  if (!have_header) throw RowError(t.source_, lineno, "missing header");
  return t;
}

Table Table::read_file(const std::string& path,
                       const std::vector<std::string>& expected_header) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse(in, path, expected_header);
}

std::int64_t to_int(const Table& t, const Table::Row& row, std::size_t col,
                    std::string_view name) {
  const std::string& s = row.fields[col];
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw RowError(t.source(), row.line,
                   "column '" + std::string(name) + "': not an integer: '" + s + "'");
  }
  return v;
}

double to_double(const Table& t, const Table::Row& row, std::size_t col,
                 std::string_view name) {
  const std::string& s = row.fields[col];
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
    throw RowError(t.source(), row.line,
                   "column '" + std::string(name) + "': not a number: '" + s + "'");
  }
  return v;
}

}  // namespace fairride::csv
