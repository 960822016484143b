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


#include "dsner/table.h"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dsner {

TextTable::TextTable(std::vector<std::string> header, std::string align)
    : header_(std::move(header)), align_(std::move(align)) {
  if (align_.size() != header_.size()) {
    throw std::invalid_argument("TextTable: one alignment per column");
  }
}

void TextTable::AddRow(std::vector<std::string> row) {
  if (row.size() != header_.size()) {
    throw std::invalid_argument("TextTable: row width mismatch");
  }
  rows_.push_back(std::move(row));
}

void TextTable::AddRule() { rows_.emplace_back(); }

void TextTable::AddNote(std::string note) { notes_.push_back(std::move(note)); }

void TextTable::Write(std::ostream &out) const {
  std::vector<size_t> width(header_.size());
  for (size_t c = 0; c < header_.size(); ++c) width[c] = header_[c].size();
  for (const auto &row : rows_) {
    for (size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  size_t total = 0;
  for (size_t w : width) total += w;
  total += 2 * (width.size() - 1);
  const std::string rule(total, '-');

  auto line = [&](const std::vector<std::string> &cells) {
    std::string text;
    for (size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) text += "  ";
      std::string pad(width[c] - cells[c].size(), ' ');
      text += align_[c] == 'r' ? pad + cells[c] : cells[c] + pad;
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out << text << '\n';
  };
  out << rule << '\n';
  line(header_);
  out << rule << '\n';
  for (const auto &row : rows_) {
    if (row.empty()) {
      out << rule << '\n';
    } else {
      line(row);
    }
  }
  out << rule << '\n';
  for (const auto &note : notes_) out << note << '\n';
}

std::string TextTable::ToString() const {
  std::ostringstream out;
  Write(out);
  return out.str();
}

}  // namespace dsner
