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


#ifndef DSNER_TESTS_TEST_UTIL_H_
#define DSNER_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "dsner/corpus.h"
#include "dsner/lexicon.h"
#include "dsner/pipeline.h"
#include "dsner/rng.h"

namespace dsner::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

// One inner vector of sentence texts per document; ids "d1", "d2", ...
Corpus MakeCorpus(const std::vector<std::vector<std::string>> &documents);

Vocabulary MakeVocabulary(const std::vector<std::pair<std::string, Label>> &terms);

AnnotatedCorpus AnnotateWith(const Vocabulary &vocabulary, const Corpus &corpus,
                             const NormalizeOptions &options = {});

// Exhaustive-window annotator: every token window whose concatenated words
// equal a term's words is a candidate; windows are then chosen greedily
// from the left, longest first. Tokens without words match nothing.
std::vector<BioTag> BruteForceAnnotate(const std::vector<Token> &tokens,
                                       const Vocabulary &vocabulary,
                                       const NormalizeOptions &options = {});

// Occurrences of `words` as a contiguous token-aligned run in `tokens`,
// overlaps included, by scanning every start.
size_t CountWordRuns(const std::vector<Token> &tokens,
                     const std::vector<std::string> &words,
                     const NormalizeOptions &options = {});

struct AnnotatorCase {
  Sentence sentence;
  Vocabulary vocabulary;
};
// Small random sentence over a shared word pool (hyphens, punctuation and
// case variation included) and a random label-disjoint vocabulary.
AnnotatorCase RandomAnnotatorCase(Rng &rng);

// Fixture written once per process.
const std::filesystem::path &FixtureDir();

// ingest, reduce-ontology, expand-variants, build-lexicon (fixture ledger)
// and annotate on the fixture in `dir`.
void RunLexiconSteps(const Workdir &wd, const std::filesystem::path &dir);

}  // namespace dsner::testing

#endif  // DSNER_TESTS_TEST_UTIL_H_
