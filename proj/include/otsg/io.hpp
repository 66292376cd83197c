// Copyright 2026 The otsg Authors
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

#ifndef OTSG_IO_HPP
#define OTSG_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "otsg/errors.hpp"

namespace otsg {

/// Formats a double with 17 significant digits ('.' decimal point,
/// locale-independent), enough to reproduce the value exactly.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

/// Minimal writer for the flat JSON documents this project emits.
/// Numbers go through fmt_double so output is byte-deterministic.
class JsonWriter {
 public:
  JsonWriter& begin_object() {
    sep();
    out_ += '{';
    fresh_ = true;
    return *this;
  }
  JsonWriter& end_object() {
    out_ += '}';
    fresh_ = false;
    return *this;
  }
  JsonWriter& key(const std::string& k) {
    sep();
    out_ += '"' + escape(k) + "\":";
    fresh_ = true;
    return *this;
  }
  JsonWriter& value(double v) {
    sep();
    out_ += fmt_double(v);
    fresh_ = false;
    return *this;
  }
  JsonWriter& value(const std::string& s) {
    sep();
    out_ += '"' + escape(s) + '"';
    fresh_ = false;
    return *this;
  }
  JsonWriter& value_raw(const std::string& raw) {
    sep();
    out_ += raw;
    fresh_ = false;
    return *this;
  }
  JsonWriter& array(const std::vector<double>& xs) {
    sep();
    out_ += '[';
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) out_ += ',';
      out_ += fmt_double(xs[i]);
    }
    out_ += ']';
    fresh_ = false;
    return *this;
  }
  const std::string& str() const { return out_; }

 private:
  void sep() {
    if (!fresh_ && !out_.empty() && out_.back() != '{' && out_.back() != '[')
      out_ += ',';
    fresh_ = false;
  }
  static std::string escape(const std::string& s) {
    std::string r;
    for (char c : s) {
      if (c == '"' || c == '\\') r += '\\';
      r += c;
    }
    return r;
  }
  std::string out_;
  bool fresh_ = true;
};

struct CsvTable {
  std::vector<std::string> header;  // empty when the file had none
  std::vector<std::vector<double>> rows;

  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw DataError("csv: no column named '" + name + "'");
  }
};

namespace detail {
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline bool parse_cell(const std::string& cell, double* out) {
  const char* start = cell.c_str();
  char* end = nullptr;
  *out = std::strtod(start, &end);
  if (end == start) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  return *end == '\0';
}
}  // namespace detail

/// Reads a comma-separated numeric table. A first line whose cells are
/// not all numeric is taken as a header. Errors name the offending
/// (row, column), 1-based as seen in the file.
inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("csv: cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = detail::split_csv_line(line);
    std::vector<double> row(cells.size());
    bool all_numeric = true;
    std::size_t bad_col = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!detail::parse_cell(cells[c], &row[c])) {
        all_numeric = false;
        bad_col = c;
        break;
      }
    }
    if (!all_numeric) {
      if (lineno == 1 && table.rows.empty() && table.header.empty()) {
        table.header = cells;
        continue;
      }
      throw DataError("csv: non-numeric cell at row " +
                       std::to_string(lineno) + ", column " +
                       std::to_string(bad_col + 1) + " of '" + path + "'");
    }
    if (!table.rows.empty() && row.size() != table.rows.front().size())
      throw DataError("csv: ragged row " + std::to_string(lineno) + " in '" +
                       path + "'");
    table.rows.push_back(std::move(row));
  }
  return table;
}

inline void write_text_file(const std::string& path,
                            const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace otsg

#endif  // OTSG_IO_HPP
