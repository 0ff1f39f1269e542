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

#include "edgealloc/csv.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "edgealloc/types.hpp"

namespace edgealloc::csv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

Table::Table(std::vector<std::string> header,
             std::vector<std::vector<std::string>> rows)
    : header_(std::move(header)), rows_(std::move(rows)) {}

bool Table::has_column(std::string_view name) const {
  for (const auto& h : header_) {
    if (h == name) return true;
  }
  return false;
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  throw DataError("missing CSV column '" + std::string(name) + "'");
}

const std::string& Table::cell(std::size_t row, std::size_t col) const {
  return rows_.at(row).at(col);
}

double Table::real(std::size_t row, std::size_t col) const {
  return parse_real(cell(row, col),
                    "row " + std::to_string(row + 1) + ", column " +
                        header_.at(col));
}

std::int64_t Table::integer(std::size_t row, std::size_t col) const {
  return parse_integer(cell(row, col),
                       "row " + std::to_string(row + 1) + ", column " +
                           header_.at(col));
}

Table parse(std::string_view text, const std::string& source) {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    auto fields = split(line);
    if (header.empty()) {
      header = std::move(fields);
    } else {
      if (fields.size() != header.size()) {
        throw DataError(source + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, got " +
                        std::to_string(fields.size()));
      }
      rows.push_back(std::move(fields));
    }
    if (end == text.size()) break;
  }
  if (header.empty()) throw DataError(source + ": empty CSV file");
  return Table(std::move(header), std::move(rows));
}

Table read(const std::filesystem::path& path) {
  return parse(read_text(path), path.string());
}

double parse_real(std::string_view field, const std::string& context) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() ||
      !std::isfinite(value)) {
    throw DataError("not a finite number: '" + std::string(field) + "' (" +
                    context + ")");
  }
  return value;
}

std::int64_t parse_integer(std::string_view field, const std::string& context) {
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw DataError("not an integer: '" + std::string(field) + "' (" +
                    context + ")");
  }
  return value;
}

std::string format_real(double value) { return fmt::format("{}", value); }

Writer::Writer(std::vector<std::string> header) : width_(header.size()) {
  add_row(std::move(header));
}

void Writer::add_row(std::vector<std::string> fields) {
  if (fields.size() != width_) {
    throw std::invalid_argument("CSV row width mismatch");
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    // No quoting dialect; such a field would not read back.
    if (fields[i].find_first_of(",\"\r\n") != std::string::npos) {
      throw std::invalid_argument("CSV field needs quoting: " + fields[i]);
    }
    if (i) text_ += ',';
    text_ += fields[i];
  }
  text_ += '\n';
}

std::string Writer::str() const { return text_; }

void Writer::save(const std::filesystem::path& path) const {
  write_text(path, text_);
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DataError("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace edgealloc::csv
