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


#include "dsner/spans.h"

namespace dsner {

std::string SpanSurface(const std::vector<Token> &tokens, size_t start,
                        size_t end, const NormalizeOptions &options) {
  std::vector<std::string> words;
  for (size_t i = start; i < end; ++i) {
    for (std::string &w : TokenWords(tokens[i].text, options)) {
      words.push_back(std::move(w));
    }
  }
  return Join(words, " ");
}

std::vector<EntitySpan> ExtractSpans(const AnnotatedSentence &sentence,
                                     const NormalizeOptions &options) {
  ValidateBio(sentence);
  std::vector<EntitySpan> spans;
  const auto &tags = sentence.tags;
  size_t i = 0;
  while (i < tags.size()) {
    if (!tags[i].is_begin()) {
      ++i;
      continue;
    }
    size_t j = i + 1;
    while (j < tags.size() && tags[j].is_inside() &&
           tags[j].label() == tags[i].label()) {
      ++j;
    }
    spans.push_back({sentence.sentence.id, i, j, tags[i].label(),
                     SpanSurface(sentence.sentence.tokens, i, j, options)});
    i = j;
  }
  return spans;
}

}  // namespace dsner
