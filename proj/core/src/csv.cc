// Copyright 2026 The dsner Authors.
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


#include "dsner/csv.h"

#include <istream>
#include <ostream>

#include "dsner/error.h"
#include "dsner/text.h"

namespace dsner {

bool CsvReader::Next(std::vector<std::string> &fields) {
  fields.clear();
  std::string line;
  if (!std::getline(in_, line)) return false;
  ++line_;
  record_line_ = line_;

  std::string field;
  bool quoted = false;
  size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (quoted) {
        // Quoted field continues on the next physical line.
        if (!std::getline(in_, line)) {
          throw DataError("CSV line " + std::to_string(record_line_) +
                          ": unterminated quoted field");
        }
        ++line_;
        field.push_back('\n');
        i = 0;
        continue;
      }
      if (!field.empty() && field.back() == '\r') field.pop_back();
      fields.push_back(std::move(field));
      return true;
    }
    char c = line[i++];
    if (quoted) {
      if (c == '"') {
        if (i < line.size() && line[i] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
}

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void WriteCsvRow(std::ostream &out, const std::vector<std::string> &fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << CsvEscape(fields[i]);
  }
  out << '\n';
}

std::vector<std::vector<std::string>> ReadCsvWithHeader(
    std::istream &in, const std::vector<std::string> &header,
    std::string_view source) {
  CsvReader reader(in);
  std::vector<std::string> fields;
  if (!reader.Next(fields) || fields != header) {
    throw DataError(std::string(source) + ": expected header '" +
                    Join(header, ",") + "'");
  }
  std::vector<std::vector<std::string>> rows;
  while (reader.Next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != header.size()) {
      throw DataError(std::string(source) + ": line " +
                      std::to_string(reader.line()) + ": expected " +
                      std::to_string(header.size()) + " columns, found " +
                      std::to_string(fields.size()));
    }
    rows.push_back(fields);
  }
  return rows;
}

}  // namespace dsner
