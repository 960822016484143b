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


#ifndef DSNER_SPANS_H_
#define DSNER_SPANS_H_

#include <string>
#include <vector>

#include "dsner/corpus.h"
#include "dsner/labels.h"
#include "dsner/text.h"

namespace dsner {

struct EntitySpan {
  SentenceId sentence;
  size_t start = 0;  // token index
  size_t end = 0;    // exclusive
  Label label = Label::kNanoparticle;
  std::string surface;  // normalized

  friend bool operator==(const EntitySpan &, const EntitySpan &) = default;
};

// Maximal B..I runs of a BIO-valid sequence. Throws DataError naming the
// sentence on invalid BIO.
std::vector<EntitySpan> ExtractSpans(const AnnotatedSentence &sentence,
                                     const NormalizeOptions &options = {});

// Normalized surface of tokens [start, end).
std::string SpanSurface(const std::vector<Token> &tokens, size_t start,
                        size_t end, const NormalizeOptions &options = {});

}  // namespace dsner

#endif  // DSNER_SPANS_H_
