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


#include "dsner/phrase_automaton.h"

#include <cassert>
#include <deque>
#include <stdexcept>

namespace dsner {

int PhraseAutomaton::Add(const std::vector<std::string> &words) {
  if (built_) throw std::logic_error("PhraseAutomaton::Add after Build");
  if (words.empty()) throw std::invalid_argument("empty pattern");
  int32_t state = 0;
  for (const std::string &w : words) {
    auto [it, inserted] =
        vocabulary_.emplace(w, static_cast<int32_t>(vocabulary_.size()));
    int32_t id = it->second;
    auto next = nodes_[state].next.find(id);
    if (next == nodes_[state].next.end()) {
      nodes_.emplace_back();
      int32_t child = static_cast<int32_t>(nodes_.size() - 1);
      nodes_[state].next.emplace(id, child);
      state = child;
    } else {
      state = next->second;
    }
  }
  if (nodes_[state].pattern < 0) {
    nodes_[state].pattern = static_cast<int32_t>(pattern_lengths_.size());
    pattern_lengths_.push_back(static_cast<int>(words.size()));
  }
  return nodes_[state].pattern;
}

void PhraseAutomaton::Build() {
  std::deque<int32_t> queue;
  for (const auto &[word, child] : nodes_[0].next) {
    nodes_[child].fail = 0;
    queue.push_back(child);
  }
  while (!queue.empty()) {
    int32_t state = queue.front();
    queue.pop_front();
    for (const auto &[word, child] : nodes_[state].next) {
      int32_t f = nodes_[state].fail;
      while (f != 0 && !nodes_[f].next.count(word)) f = nodes_[f].fail;
      auto it = nodes_[f].next.find(word);
      int32_t target = (it != nodes_[f].next.end() && it->second != child)
                           ? it->second
                           : 0;
      nodes_[child].fail = target;
      nodes_[child].output_link = nodes_[target].pattern >= 0
                                      ? target
                                      : nodes_[target].output_link;
      queue.push_back(child);
    }
  }
  built_ = true;
}

int32_t PhraseAutomaton::WordId(const std::string &word) const {
  auto it = vocabulary_.find(word);
  return it == vocabulary_.end() ? -1 : it->second;
}

int32_t PhraseAutomaton::Step(int32_t state, int32_t word) const {
  if (word < 0) return 0;
  while (true) {
    auto it = nodes_[state].next.find(word);
    if (it != nodes_[state].next.end()) return it->second;
    if (state == 0) return 0;
    state = nodes_[state].fail;
  }
}

std::vector<PhraseAutomaton::Hit> PhraseAutomaton::FindAll(
    const std::vector<Token> &tokens, const NormalizeOptions &options) const {
  assert(built_);
  // Flatten tokens into words, remembering token boundaries. A token with
  // no words occupies one slot with an id that matches nothing.
  std::vector<int32_t> words;
  std::vector<size_t> word_token;
  std::vector<bool> token_first;
  std::vector<bool> token_last;
  for (size_t t = 0; t < tokens.size(); ++t) {
    std::vector<std::string> tw = TokenWords(tokens[t].text, options);
    if (tw.empty()) {
      words.push_back(-1);
      word_token.push_back(t);
      token_first.push_back(true);
      token_last.push_back(true);
      continue;
    }
    for (size_t i = 0; i < tw.size(); ++i) {
      words.push_back(WordId(tw[i]));
      word_token.push_back(t);
      token_first.push_back(i == 0);
      token_last.push_back(i + 1 == tw.size());
    }
  }

  std::vector<Hit> hits;
  int32_t state = 0;
  for (size_t pos = 0; pos < words.size(); ++pos) {
    state = Step(state, words[pos]);
    if (!token_last[pos]) continue;
    int32_t node = nodes_[state].pattern >= 0 ? state : nodes_[state].output_link;
    while (node >= 0) {
      int pattern = nodes_[node].pattern;
      size_t length = static_cast<size_t>(pattern_lengths_[pattern]);
      size_t start = pos + 1 - length;
      if (token_first[start]) {
        hits.push_back({word_token[start], word_token[pos] + 1, pattern});
      }
      node = nodes_[node].output_link;
    }
  }
  return hits;
}

}  // namespace dsner
