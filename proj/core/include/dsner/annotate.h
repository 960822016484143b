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


#ifndef DSNER_ANNOTATE_H_
#define DSNER_ANNOTATE_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dsner/corpus.h"
#include "dsner/lexicon.h"
#include "dsner/phrase_automaton.h"

namespace dsner {

struct Match {
  size_t start = 0;  // token index
  size_t end = 0;    // exclusive
  int pattern = 0;

  friend bool operator==(const Match &, const Match &) = default;
};

// Gazetteer matcher compiled from a vocabulary. Immutable after Compile()
// and safe to share across threads.
class Matcher {
 public:
  struct Pattern {
    std::string surface;
    Label label;
    size_t num_words;
  };

  // Throws DataError when a surface normalizes to nothing or when two
  // surfaces with different labels normalize to the same word sequence.
  static Matcher Compile(const Vocabulary &vocabulary,
                         const NormalizeOptions &options = {});

  size_t num_patterns() const { return patterns_.size(); }
  const Pattern &pattern(int id) const { return patterns_[id]; }
  const NormalizeOptions &options() const { return options_; }

  // Every token-aligned match, overlaps included.
  std::vector<Match> FindAll(const std::vector<Token> &tokens) const;

  // Disjoint matches: leftmost start first, then the longest span; matches
  // overlapping an already selected one are dropped. Sorted by start.
  std::vector<Match> FindDisjoint(const std::vector<Token> &tokens) const;

  AnnotatedSentence Annotate(const Sentence &sentence) const;

 private:
  NormalizeOptions options_;
  PhraseAutomaton automaton_;
  std::vector<Pattern> patterns_;  // indexed by automaton pattern id
};

// Applies the leftmost-longest rule to an arbitrary match list.
std::vector<Match> ResolveOverlaps(std::vector<Match> matches);

AnnotatedSentence AnnotateSentence(const Matcher &matcher,
                                   const Sentence &sentence);

// (surface, label) -> disjoint occurrence count.
using TermCounts = std::map<std::pair<std::string, Label>, uint64_t>;

struct AnnotationResult {
  AnnotatedCorpus corpus;
  TermCounts counts;  // every pattern listed, zero counts included
};

AnnotationResult AnnotateCorpus(const Matcher &matcher, const Corpus &corpus);

// CSV surface,label,count.
void WriteTermCounts(const TermCounts &counts, std::ostream &out);
TermCounts ReadTermCounts(std::istream &in, std::string_view name);

}  // namespace dsner

#endif  // DSNER_ANNOTATE_H_
