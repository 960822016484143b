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


#ifndef DSNER_PHRASE_AUTOMATON_H_
#define DSNER_PHRASE_AUTOMATON_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "dsner/text.h"

namespace dsner {

// Aho-Corasick automaton over word sequences. Patterns are sequences of
// normalized words; matching reports every occurrence, overlaps included,
// aligned to token boundaries.
class PhraseAutomaton {
 public:
  struct Hit {
    size_t token_begin;  // first token
    size_t token_end;    // one past the last token
    int pattern;
  };

  // Adds a pattern and returns its id. Equal word sequences share an id.
  // Must not be called after Build().
  int Add(const std::vector<std::string> &words);
  void Build();

  int num_patterns() const { return static_cast<int>(pattern_lengths_.size()); }
  int pattern_length(int pattern) const { return pattern_lengths_[pattern]; }

  // All hits where the pattern starts at the first word of a token and ends
  // at the last word of a token. Ordered by end position, then by pattern
  // length descending.
  std::vector<Hit> FindAll(const std::vector<Token> &tokens,
                           const NormalizeOptions &options) const;

 private:
  struct Node {
    std::unordered_map<int32_t, int32_t> next;
    int32_t fail = 0;
    int32_t pattern = -1;      // pattern ending exactly here
    int32_t output_link = -1;  // nearest proper suffix node with a pattern
  };

  int32_t WordId(const std::string &word) const;
  int32_t Step(int32_t state, int32_t word) const;

  std::unordered_map<std::string, int32_t> vocabulary_;
  std::vector<Node> nodes_{1};
  std::vector<int> pattern_lengths_;
  bool built_ = false;
};

}  // namespace dsner

#endif  // DSNER_PHRASE_AUTOMATON_H_
