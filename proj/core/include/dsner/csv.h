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


#ifndef DSNER_CSV_H_
#define DSNER_CSV_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace dsner {

// Minimal RFC 4180 reader/writer: comma separated, fields optionally
// double-quoted, "" escapes a quote inside a quoted field, quoted fields may
// span lines.
class CsvReader {
 public:
  explicit CsvReader(std::istream &in) : in_(in) {}

  // Reads the next record into `fields`. Returns false at end of input.
  // Throws DataError on an unterminated quoted field.
  bool Next(std::vector<std::string> &fields);

  // Physical line on which the last returned record started (1-based).
  size_t line() const { return record_line_; }

 private:
  std::istream &in_;
  size_t line_ = 0;
  size_t record_line_ = 0;
};

void WriteCsvRow(std::ostream &out, const std::vector<std::string> &fields);
std::string CsvEscape(std::string_view field);

// Reads a CSV whose first record must equal `header`. Returns data rows;
// throws DataError naming `source` and the line on a column count mismatch.
std::vector<std::vector<std::string>> ReadCsvWithHeader(
    std::istream &in, const std::vector<std::string> &header,
    std::string_view source);

}  // namespace dsner

#endif  // DSNER_CSV_H_
