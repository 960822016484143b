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


#include "dsner/text.h"

namespace dsner {

namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

bool IsPunctuationChar(char c) {
  switch (c) {
    case '.':
    case ',':
    case ';':
    case ':':
    case '(':
    case ')':
    case '[':
    case ']':
    case '{':
    case '}':
    case '!':
    case '?':
    case '"':
    case '\'':
      return true;
    default:
      return false;
  }
}

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  size_t begin = 0;
  bool in_token = false;
  auto flush = [&](size_t end) {
    if (in_token) {
      tokens.push_back({std::string(text.substr(begin, end - begin)), begin,
                        end});
      in_token = false;
    }
  };
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (IsSpace(c)) {
      flush(i);
    } else if (IsPunctuationChar(c)) {
      flush(i);
      tokens.push_back({std::string(1, c), i, i + 1});
    } else if (!in_token) {
      begin = i;
      in_token = true;
    }
  }
  flush(text.size());
  return tokens;
}

std::string AsciiLower(std::string_view text) {
  std::string out(text);
  for (char &c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::string> TokenWords(std::string_view token,
                                    const NormalizeOptions &options) {
  std::vector<std::string> words;
  std::string current;
  for (char c : token) {
    if (c == '-' || IsSpace(c)) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
      continue;
    }
    if (!options.case_sensitive && c >= 'A' && c <= 'Z') {
      c = static_cast<char>(c - 'A' + 'a');
    }
    current.push_back(c);
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

std::vector<std::string> TermWords(std::string_view term,
                                   const NormalizeOptions &options) {
  std::vector<std::string> words;
  for (const Token &token : Tokenize(term)) {
    for (std::string &w : TokenWords(token.text, options)) {
      words.push_back(std::move(w));
    }
  }
  return words;
}

std::string Normalize(std::string_view term, const NormalizeOptions &options) {
  return Join(TermWords(term, options), " ");
}

std::string Join(const std::vector<std::string> &parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> Split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  size_t begin = 0;
  while (true) {
    size_t pos = text.find(sep, begin);
    if (pos == std::string_view::npos) {
      parts.emplace_back(text.substr(begin));
      break;
    }
    parts.emplace_back(text.substr(begin, pos - begin));
    begin = pos + 1;
  }
  return parts;
}

}  // namespace dsner
