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


#ifndef DSNER_TEXT_H_
#define DSNER_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dsner {

// A token of a sentence. Offsets are byte offsets into the UTF-8 sentence
// text, `end` exclusive.
struct Token {
  std::string text;
  size_t start = 0;
  size_t end = 0;

  friend bool operator==(const Token &, const Token &) = default;
};

// Rule-based tokenizer. Splits on ASCII whitespace; each of . , ; : ( ) [ ]
// { } ! ? " ' becomes its own token. Everything else, hyphens and digits
// included, stays inside the surrounding token.
std::vector<Token> Tokenize(std::string_view text);

bool IsPunctuationChar(char c);

struct NormalizeOptions {
  bool case_sensitive = false;
};

// Matching words of a single token: ASCII-lowercased (unless case
// sensitive), hyphens folded to spaces, split on whitespace. May be empty
// (e.g. for a token consisting only of hyphens).
std::vector<std::string> TokenWords(std::string_view token,
                                    const NormalizeOptions &options = {});

// Matching words of a free-text term: tokenize, then TokenWords on each
// token, concatenated.
std::vector<std::string> TermWords(std::string_view term,
                                   const NormalizeOptions &options = {});

// Canonical form of a term: TermWords joined by single spaces. Idempotent.
std::string Normalize(std::string_view term,
                      const NormalizeOptions &options = {});

std::string AsciiLower(std::string_view text);

// Joins with a single-character separator.
std::string Join(const std::vector<std::string> &parts, std::string_view sep);
std::vector<std::string> Split(std::string_view text, char sep);

}  // namespace dsner

#endif  // DSNER_TEXT_H_
