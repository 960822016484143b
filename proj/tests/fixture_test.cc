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


#include "dsner/fixture.h"

#include <gtest/gtest.h>

#include <set>

#include "dsner/pipeline.h"
#include "test_util.h"

namespace dsner {
namespace {

TEST(FixtureTest, DeterministicPerSeed) {
  FixtureOptions small;
  small.sentences = 300;
  Fixture a = GenerateFixture(small);
  Fixture b = GenerateFixture(small);
  EXPECT_EQ(a.corpus_jsonl, b.corpus_jsonl);
  EXPECT_EQ(a.ledger_jsonl, b.ledger_jsonl);
  small.seed = 7;
  EXPECT_NE(GenerateFixture(small).corpus_jsonl, a.corpus_jsonl);
}

TEST(FixtureTest, PipelineYieldsExpectedVocabulary) {
  const Fixture fixture = GenerateFixture();
  testing::TempDir tmp;
  Workdir wd(tmp.path());
  testing::RunLexiconSteps(wd, testing::FixtureDir());
  EXPECT_EQ(LoadCorpus(wd).NumSentences(), 5000u);

  const Vocabulary v = LoadVocabulary(wd);
  std::vector<FixtureTerm> got;
  for (const TermEntry &e : v.entries()) got.push_back({e.surface, e.label});
  ASSERT_EQ(got.size(), fixture.expected_vocabulary.size());
  EXPECT_EQ(got.size(), 200u);
  for (size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].surface, fixture.expected_vocabulary[i].surface);
    EXPECT_EQ(got[i].label, fixture.expected_vocabulary[i].label);
  }

  // Planted terms occur in the corpus but never in the vocabulary.
  EXPECT_EQ(fixture.planted.size(), 20u);
  std::set<std::string> planted;
  for (const FixtureTerm &t : fixture.planted) {
    EXPECT_FALSE(v.Contains(t.surface)) << t.surface;
    planted.insert(t.surface);
  }
  EXPECT_EQ(planted.size(), 20u);
}

}  // namespace
}  // namespace dsner
