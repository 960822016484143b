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


#include <benchmark/benchmark.h>

#include <sstream>

#include "dsner/annotate.h"
#include "dsner/corpus.h"
#include "dsner/fixture.h"
#include "dsner/lexicon.h"
#include "dsner/rng.h"
#include "dsner/tagger.h"
#include "dsner/text.h"

namespace dsner {
namespace {

const Corpus &FixtureCorpus() {
  static const Corpus corpus = [] {
    FixtureOptions options;
    options.sentences = 1000;
    std::istringstream in(GenerateFixture(options).corpus_jsonl);
    return ParseJsonlCorpus(in, "fixture");
  }();
  return corpus;
}

Vocabulary FixtureVocabulary() {
  std::vector<TermEntry> entries;
  for (const FixtureTerm &t : GenerateFixture().expected_vocabulary) {
    TermEntry e;
    e.surface = t.surface;
    e.label = t.label;
    entries.push_back(e);
  }
  return Vocabulary(std::move(entries));
}

void BM_Tokenize(benchmark::State &state) {
  std::vector<std::string> texts;
  FixtureCorpus().ForEachSentence([&](const Sentence &s) { texts.push_back(s.text); });
  size_t bytes = 0;
  for (auto _ : state) {
    for (const std::string &t : texts) {
      benchmark::DoNotOptimize(Tokenize(t));
      bytes += t.size();
    }
  }
  state.SetBytesProcessed(static_cast<int64_t>(bytes));
}
BENCHMARK(BM_Tokenize);

void BM_MatcherAnnotate(benchmark::State &state) {
  Matcher matcher = Matcher::Compile(FixtureVocabulary());
  const Corpus &corpus = FixtureCorpus();
  int64_t sentences = 0;
  for (auto _ : state) {
    corpus.ForEachSentence([&](const Sentence &s) {
      benchmark::DoNotOptimize(matcher.Annotate(s));
      ++sentences;
    });
  }
  state.SetItemsProcessed(sentences);
}
BENCHMARK(BM_MatcherAnnotate);

void BM_MatcherCompile(benchmark::State &state) {
  Vocabulary v = FixtureVocabulary();
  for (auto _ : state) benchmark::DoNotOptimize(Matcher::Compile(v));
}
BENCHMARK(BM_MatcherCompile);

void BM_ConstrainedViterbi(benchmark::State &state) {
  Rng rng(1);
  ScoreLattice lattice;
  lattice.emission.resize(static_cast<size_t>(state.range(0)));
  for (auto &row : lattice.emission) {
    for (double &v : row) v = rng.UniformReal();
  }
  for (auto &row : lattice.transition) {
    for (double &v : row) v = rng.UniformReal();
  }
  for (auto _ : state) benchmark::DoNotOptimize(ConstrainedViterbi(lattice));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ConstrainedViterbi)->Arg(10)->Arg(40)->Arg(160);

}  // namespace
}  // namespace dsner

BENCHMARK_MAIN();
