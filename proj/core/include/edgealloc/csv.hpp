// Copyright 2026 The edgealloc Authors
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

// Minimal comma-separated reader/writer: UTF-8, '.' decimal point, no
// quoting. Every file format in this project is plain numeric or
// identifier-valued, so fields never contain commas.

#ifndef EDGEALLOC_CSV_HPP_
#define EDGEALLOC_CSV_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace edgealloc::csv {

class Table {
 public:
  Table() = default;
  Table(std::vector<std::string> header,
        std::vector<std::vector<std::string>> rows);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t n_rows() const { return rows_.size(); }
  bool has_column(std::string_view name) const;
  // Throws DataError when the column is missing.
  std::size_t column(std::string_view name) const;

  const std::string& cell(std::size_t row, std::size_t col) const;
  double real(std::size_t row, std::size_t col) const;
  std::int64_t integer(std::size_t row, std::size_t col) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

Table parse(std::string_view text, const std::string& source = "<memory>");
Table read(const std::filesystem::path& path);

double parse_real(std::string_view field, const std::string& context);
std::int64_t parse_integer(std::string_view field, const std::string& context);

// Shortest decimal representation that round-trips to the same double.
std::string format_real(double value);

// Accumulates rows and writes them with '\n' line endings. Fields are not
// quoted; add_row throws std::invalid_argument on commas, quotes or newlines.
class Writer {
 public:
  explicit Writer(std::vector<std::string> header);
  void add_row(std::vector<std::string> fields);
  std::string str() const;
  void save(const std::filesystem::path& path) const;

 private:
  std::size_t width_;
  std::string text_;
};

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace edgealloc::csv

#endif  // EDGEALLOC_CSV_HPP_
