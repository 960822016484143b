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


#include "dsner/tagger.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "dsner/error.h"
#include "dsner/rng.h"
#include "test_util.h"

namespace dsner {
namespace {

using testing::AnnotateWith;
using testing::MakeCorpus;
using testing::MakeVocabulary;

double Score(const ScoreLattice &lattice, const std::vector<BioTag> &tags) {
  double s = 0.0;
  for (size_t i = 0; i < tags.size(); ++i) {
    int prev = i == 0 ? 0 : tags[i - 1].index() + 1;
    s += lattice.transition[prev][tags[i].index()] +
         lattice.emission[i][tags[i].index()];
  }
  return s;
}

ScoreLattice RandomLattice(Rng &rng, size_t n) {
  ScoreLattice l;
  l.emission.resize(n);
  for (auto &row : l.emission) {
    for (double &v : row) v = rng.UniformReal() * 4.0 - 2.0;
  }
  for (auto &row : l.transition) {
    for (double &v : row) v = rng.UniformReal() * 4.0 - 2.0;
  }
  return l;
}

TEST(ViterbiTest, AgreesWithExhaustiveSearch) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 1 + rng.Uniform(4);
    ScoreLattice l = RandomLattice(rng, n);
    std::vector<BioTag> best;
    double best_score = -INFINITY;
    std::vector<int> digits(n, 0);
    while (true) {
      std::vector<BioTag> tags;
      for (int d : digits) tags.push_back(BioTag::FromIndex(d));
      if (IsValidBio(tags)) {
        double s = Score(l, tags);
        if (s > best_score) {
          best_score = s;
          best = tags;
        }
      }
      size_t i = 0;
      while (i < n && ++digits[i] == BioTag::kCount) digits[i++] = 0;
      if (i == n) break;
    }
    std::vector<BioTag> got = ConstrainedViterbi(l);
    EXPECT_TRUE(IsValidBio(got));
    EXPECT_NEAR(Score(l, got), best_score, 1e-9);
    EXPECT_EQ(got, best);
  }
}

TEST(ViterbiTest, FlatLatticeIsAllOutside) {
  ScoreLattice l;
  l.emission.resize(6);
  for (auto &row : l.emission) row.fill(0.0);
  for (auto &row : l.transition) row.fill(0.0);
  EXPECT_EQ(ConstrainedViterbi(l), std::vector<BioTag>(6, BioTag::Outside()));
  l.emission.clear();
  EXPECT_TRUE(ConstrainedViterbi(l).empty());
}

TEST(ViterbiTest, InsideNeedsMatchingBegin) {
  ScoreLattice l;
  l.emission.resize(2);
  for (auto &row : l.emission) row.fill(0.0);
  for (auto &row : l.transition) row.fill(0.0);
  // I-Event is strongly preferred everywhere, but may not open a sentence.
  const int inside = BioTag::Inside(Label::kEvent).index();
  l.emission[0][inside] = 10.0;
  l.emission[1][inside] = 10.0;
  std::vector<BioTag> got = ConstrainedViterbi(l);
  EXPECT_EQ(got[0], BioTag::Begin(Label::kEvent));
  EXPECT_EQ(got[1], BioTag::Inside(Label::kEvent));
}

TEST(FeatureExtractorTest, Templates) {
  std::vector<std::string> tokens = {"Gold", "NP-3"};
  std::vector<std::string> f = FeatureExtractor::Features(tokens, 1, BioTag::Begin(Label::kMaterial));
  auto has = [&](const std::string &key) {
    return std::find(f.begin(), f.end(), key) != f.end();
  };
  EXPECT_TRUE(has("bias"));
  EXPECT_TRUE(has("w=np-3"));
  EXPECT_TRUE(has("sh=X-d"));
  EXPECT_TRUE(has("p1=n"));
  EXPECT_TRUE(has("s3=p-3"));
  EXPECT_TRUE(has("w-1=gold"));
  EXPECT_TRUE(has("w-2=<s>"));
  EXPECT_TRUE(has("w+1=</s>"));
  EXPECT_TRUE(has("w+2=</s2>"));
  EXPECT_TRUE(has("t=B-Material"));
  EXPECT_EQ(FeatureExtractor::Transition(std::nullopt), "t=<s>");
  EXPECT_EQ(FeatureExtractor::WordShape("AuNP12"), "XxXd");
  EXPECT_EQ(f, FeatureExtractor::Features(tokens, 1, BioTag::Begin(Label::kMaterial)));
}

// Plain averaged perceptron: sparse weights, a full running sum after every
// example, and the averaged weight taken as sum / examples.
class ReferencePerceptron {
 public:
  using Row = std::array<double, BioTag::kCount>;

  void Train(const AnnotatedCorpus &corpus, int epochs, uint64_t seed) {
    std::vector<const AnnotatedSentence *> sentences;
    corpus.ForEachSentence([&](const AnnotatedSentence &s) { sentences.push_back(&s); });
    std::vector<size_t> order(sentences.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    for (int e = 0; e < epochs; ++e) {
      rng.Shuffle(order);
      for (size_t s : order) {
        const std::vector<std::string> tokens = sentences[s]->sentence.TokenTexts();
        std::vector<BioTag> predicted = ConstrainedViterbi(Lattice(tokens));
        const std::vector<BioTag> &gold = sentences[s]->tags;
        if (predicted != gold) {
          Add(tokens, gold, +1.0);
          Add(tokens, predicted, -1.0);
        }
        ++examples_;
        for (const auto &[f, row] : w_) {
          Row &acc = sum_[f];
          for (int t = 0; t < BioTag::kCount; ++t) acc[t] += row[t];
        }
      }
    }
  }

  double Averaged(const std::string &feature, BioTag tag) const {
    auto it = sum_.find(feature);
    return it == sum_.end() ? 0.0 : it->second[tag.index()] / examples_;
  }
  const std::map<std::string, Row> &sums() const { return sum_; }

 private:
  ScoreLattice Lattice(const std::vector<std::string> &tokens) const {
    ScoreLattice l;
    l.emission.resize(tokens.size());
    for (size_t i = 0; i < tokens.size(); ++i) {
      l.emission[i].fill(0.0);
      for (const std::string &f : FeatureExtractor::Emission(tokens, i)) {
        auto it = w_.find(f);
        if (it == w_.end()) continue;
        for (int t = 0; t < BioTag::kCount; ++t) l.emission[i][t] += it->second[t];
      }
    }
    for (int prev = -1; prev < BioTag::kCount; ++prev) {
      std::optional<BioTag> p;
      if (prev >= 0) p = BioTag::FromIndex(prev);
      auto it = w_.find(FeatureExtractor::Transition(p));
      for (int t = 0; t < BioTag::kCount; ++t) {
        l.transition[prev + 1][t] = it == w_.end() ? 0.0 : it->second[t];
      }
    }
    return l;
  }

  void Add(const std::vector<std::string> &tokens, const std::vector<BioTag> &tags,
           double sign) {
    for (size_t i = 0; i < tags.size(); ++i) {
      std::optional<BioTag> prev;
      if (i > 0) prev = tags[i - 1];
      for (const std::string &f : FeatureExtractor::Features(tokens, i, prev)) {
        Row &row = w_.try_emplace(f, Row{}).first->second;
        row[tags[i].index()] += sign;
      }
    }
  }

  std::map<std::string, Row> w_;
  std::map<std::string, Row> sum_;
  double examples_ = 0;
};

AnnotatedCorpus ToyTraining() {
  Vocabulary v = MakeVocabulary({{"gold nanoparticle", Label::kNanoparticle},
                                 {"silica", Label::kMaterial},
                                 {"mtt assay", Label::kTechnique},
                                 {"zeta potential", Label::kProperty},
                                 {"apoptosis", Label::kEvent}});
  return AnnotateWith(
      v, MakeCorpus({{"The gold nanoparticle was coated with silica .",
                      "An MTT assay showed apoptosis .",
                      "The zeta potential of silica was low ."},
                     {"gold nanoparticle uptake caused apoptosis",
                      "silica and gold nanoparticle"},
                     {"Cells underwent apoptosis .", "Results were low .",
                      "The zeta potential was measured ."}}));
}

TEST(PerceptronTest, MatchesReferenceImplementation) {
  AnnotatedCorpus corpus = ToyTraining();
  for (int epochs : {1, 3}) {
    TrainConfig config;
    config.epochs = epochs;
    config.seed = 7;
    PerceptronTagger model = PerceptronTagger::Train(corpus, config);
    ReferencePerceptron ref;
    ref.Train(corpus, epochs, 7);
    ASSERT_FALSE(ref.sums().empty());
    for (const auto &[feature, row] : ref.sums()) {
      for (int t = 0; t < BioTag::kCount; ++t) {
        BioTag tag = BioTag::FromIndex(t);
        EXPECT_NEAR(model.Weight(feature, tag), ref.Averaged(feature, tag), 1e-9)
            << feature << " " << tag.ToString();
      }
    }
  }
}

TEST(PerceptronTest, LearnsToyCorpus) {
  AnnotatedCorpus corpus = ToyTraining();
  TrainConfig config;
  config.epochs = 20;
  std::vector<EpochStats> epochs;
  PerceptronTagger model = PerceptronTagger::Train(
      corpus, config, nullptr, [&](const EpochStats &s) { epochs.push_back(s); });
  ASSERT_EQ(epochs.size(), 20u);
  EXPECT_EQ(epochs.back().accuracy(), 1.0);
  corpus.ForEachSentence([&](const AnnotatedSentence &s) {
    EXPECT_EQ(model.Predict(s.sentence), s.tags) << s.sentence.text;
  });
  EXPECT_TRUE(model.Predict(Sentence::FromText({"x", 0}, "")).empty());
}

TEST(PerceptronTest, DeterministicAndBioValid) {
  AnnotatedCorpus corpus = ToyTraining();
  TrainConfig config;
  config.epochs = 2;
  PerceptronTagger a = PerceptronTagger::Train(corpus, config);
  PerceptronTagger b = PerceptronTagger::Train(corpus, config);
  EXPECT_EQ(a.SaveToString(), b.SaveToString());
  config.seed = 43;
  EXPECT_EQ(PerceptronTagger::Train(corpus, config).metadata().seed, 43u);

  Rng rng(3);
  const std::vector<std::string> pool = {"gold", "nanoparticle", "silica", "assay",
                                         "MTT", "apoptosis", ",", "the", "zeta",
                                         "potential", "x9", "(NP)"};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> tokens;
    const size_t n = rng.Uniform(12);
    for (size_t i = 0; i < n; ++i) tokens.push_back(pool[rng.Uniform(pool.size())]);
    Sentence s = Sentence::FromTokens({"f", 0}, tokens);
    std::vector<BioTag> tags = a.Predict(s);
    ASSERT_EQ(tags.size(), n);
    EXPECT_TRUE(IsValidBio(tags));
    EXPECT_EQ(tags, a.Predict(s));
  }
}

TEST(PerceptronTest, SaveLoadRoundTrip) {
  AnnotatedCorpus corpus = ToyTraining();
  TrainConfig config;
  config.epochs = 3;
  PerceptronTagger model = PerceptronTagger::Train(corpus, config);
  std::istringstream in(model.SaveToString());
  PerceptronTagger back = PerceptronTagger::Load(in);
  EXPECT_EQ(back.SaveToString(), model.SaveToString());
  EXPECT_EQ(back.metadata().epochs, 3);
  EXPECT_EQ(back.metadata().corpus_digest, model.metadata().corpus_digest);
  corpus.ForEachSentence([&](const AnnotatedSentence &s) {
    EXPECT_EQ(back.Predict(s.sentence), model.Predict(s.sentence));
  });
}

TEST(PerceptronTest, LoadErrors) {
  TrainConfig config;
  std::string text = PerceptronTagger::Train(ToyTraining(), config).SaveToString();
  auto load = [](const std::string &t) {
    std::istringstream in(t);
    return PerceptronTagger::Load(in);
  };
  std::string wrong_version = text;
  size_t pos = wrong_version.find("format_version\t1");
  ASSERT_NE(pos, std::string::npos);
  wrong_version.replace(pos, 16, "format_version\t9");
  EXPECT_THROW(load(wrong_version), DataError);
  EXPECT_THROW(load("garbage\n"), DataError);
  std::string tampered = text;
  pos = tampered.find("\"epochs\":1");
  ASSERT_NE(pos, std::string::npos);
  tampered.replace(pos, 10, "\"epochs\":2");
  EXPECT_THROW(load(tampered), DataError);
}

TEST(PerceptronTest, TrainingErrors) {
  TrainConfig config;
  EXPECT_THROW(PerceptronTagger::Train(AnnotatedCorpus(), config), DataError);
  config.epochs = 0;
  EXPECT_THROW(PerceptronTagger::Train(ToyTraining(), config), UsageError);
  config.epochs = 1;
  config.gazetteer_features = true;
  EXPECT_THROW(PerceptronTagger::Train(ToyTraining(), config), UsageError);
}

TEST(PerceptronTest, GazetteerFeatures) {
  Vocabulary v = MakeVocabulary({{"silica", Label::kMaterial}});
  Matcher m = Matcher::Compile(v);
  TrainConfig config;
  config.epochs = 2;
  config.gazetteer_features = true;
  PerceptronTagger model = PerceptronTagger::Train(ToyTraining(), config, &m);
  EXPECT_TRUE(model.metadata().gazetteer_features);
  EXPECT_NE(model.Weight("gaz=B-Material", BioTag::Begin(Label::kMaterial)), 0.0);
  std::istringstream in(model.SaveToString());
  PerceptronTagger back = PerceptronTagger::Load(in);
  Sentence s = Sentence::FromText({"x", 0}, "silica");
  EXPECT_THROW(back.Predict(s), DataError);
  back.set_gazetteer(&m);
  EXPECT_EQ(back.Predict(s), model.Predict(s));
}

}  // namespace
}  // namespace dsner
