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


#ifndef DSNER_TABLE_H_
#define DSNER_TABLE_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace dsner {

// Plain-text table with padded columns. `align` holds one 'l' or 'r' per
// column.
class TextTable {
 public:
  TextTable(std::vector<std::string> header, std::string align);

  void AddRow(std::vector<std::string> row);
  // Horizontal rule before the next row.
  void AddRule();
  // Footnote printed under the table.
  void AddNote(std::string note);

  void Write(std::ostream &out) const;
  std::string ToString() const;

 private:
  std::vector<std::string> header_;
  std::string align_;
  std::vector<std::vector<std::string>> rows_;  // empty row = rule
  std::vector<std::string> notes_;
};

}  // namespace dsner

#endif  // DSNER_TABLE_H_
