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


#include "dsner/lexicon.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "dsner/error.h"
#include "dsner/rng.h"
#include "dsner/text.h"
#include "test_util.h"

namespace dsner {
namespace {

using testing::MakeCorpus;

bool Has(const std::vector<std::string> &v, const std::string &s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

TermEntry Base(std::string surface, Label label, std::string key = "") {
  return TermEntry{std::move(surface), label, TermOrigin::kOntology, "", std::move(key)};
}

TermEntry Variant(std::string surface, Label label, std::string parent) {
  return TermEntry{std::move(surface), label, TermOrigin::kVariant, std::move(parent),
                   ""};
}

CurationDecision Decide(std::string surface, CurationAction action,
                        std::string timestamp,
                        std::optional<Label> to = std::nullopt) {
  CurationDecision d;
  d.surface = std::move(surface);
  d.action = action;
  d.to_label = to;
  d.actor = "expert";
  d.timestamp = std::move(timestamp);
  return d;
}

TEST(BaseTermsTest, PreferredLabelAndSynonyms) {
  LabelSubtree t;
  t.label = Label::kNanoparticle;
  LabelConcept a;
  a.node.key = "N1";
  a.forms = {"nanoparticle", "np"};
  LabelConcept b;
  b.node.key = "N2";
  b.forms = {"np", "quantum dot"};
  t.concepts = {a, b};
  std::vector<TermEntry> terms = BaseTerms({t});
  ASSERT_EQ(terms.size(), 3u);
  for (const TermEntry &e : terms) {
    EXPECT_EQ(e.origin, TermOrigin::kOntology);
    EXPECT_EQ(e.label, Label::kNanoparticle);
  }
  EXPECT_EQ(terms[1].surface, "np");
  EXPECT_EQ(terms[1].concept_key, "N1");
}

TEST(VariantRulesTest, Inflection) {
  EXPECT_TRUE(Has(InflectionVariants("nanocapsule"), "nanocapsules"));
  EXPECT_TRUE(Has(InflectionVariants("nanocapsules"), "nanocapsule"));
  EXPECT_TRUE(Has(InflectionVariants("gold nanoparticle"), "gold nanoparticles"));
  EXPECT_TRUE(Has(InflectionVariants("assay of toxicity"), "assay of toxicities"));
  EXPECT_TRUE(Has(InflectionVariants("matrix"), "matrixes"));
  EXPECT_TRUE(Has(InflectionVariants("quantum dots"), "quantum dot"));
  EXPECT_FALSE(Has(InflectionVariants("gold nanoparticle"), "gold nanoparticle"));
}

TEST(VariantRulesTest, Spacing) {
  std::vector<std::string> v = SpacingVariants("iron oxide");
  EXPECT_TRUE(Has(v, "ironoxide"));
  EXPECT_TRUE(Has(SpacingVariants("nanoparticle"), "nano particle"));
  EXPECT_TRUE(Has(SpacingVariants("zeta potential value"), "zetapotentialvalue"));
  EXPECT_TRUE(SpacingVariants("np").empty());
}

TEST(VariantRulesTest, Permutation) {
  EXPECT_TRUE(Has(PermutationVariants("molecular function"), "function of molecule"));
  EXPECT_TRUE(Has(PermutationVariants("function of molecule"), "molecular function"));
  EXPECT_TRUE(Has(PermutationVariants("magnetic property"), "property of magnet"));
  EXPECT_TRUE(PermutationVariants("gold").empty());
}

TEST(VariantRulesTest, Spelling) {
  EXPECT_TRUE(Has(SpellingVariants("tumour cell"), "tumor cell"));
  EXPECT_TRUE(Has(SpellingVariants("aluminum oxide"), "aluminium oxide"));
  EXPECT_TRUE(Has(SpellingVariants("functionalisation"), "functionalization"));
  EXPECT_TRUE(Has(SpellingVariants("haemolysis"), "hemolysis"));
}

TEST(VariantRulesTest, UnionExcludesTermAndDuplicates) {
  std::vector<std::string> all = VariantCandidates("tumour marker");
  std::set<std::string> unique(all.begin(), all.end());
  EXPECT_EQ(unique.size(), all.size());
  EXPECT_FALSE(unique.count("tumour marker"));
  EXPECT_TRUE(unique.count("tumour markers"));
  EXPECT_TRUE(unique.count("tumor marker"));
}

TEST(GenerateVariantsTest, OnlyAttestedCandidates) {
  std::vector<TermEntry> base = {Base("nanocapsule", Label::kNanoparticle, "N1"),
                                 Base("iron oxide", Label::kMaterial, "M1"),
                                 Base("quantum dot", Label::kNanoparticle, "N2"),
                                 Base("quantum dots", Label::kNanoparticle, "N2")};
  Corpus c = MakeCorpus({{"Nanocapsules of ironoxide .", "two nanocapsules"}});
  VariantResult r = GenerateVariants(base, c);
  ASSERT_EQ(r.candidates.size(), 2u);
  TermEntry want = Variant("nanocapsules", Label::kNanoparticle, "nanocapsule");
  want.concept_key = "N1";
  EXPECT_EQ(r.candidates[0], want);
  EXPECT_EQ(r.candidates[0].label, Label::kNanoparticle);
  EXPECT_EQ(r.candidates[1].surface, "ironoxide");
  EXPECT_EQ(r.candidates[1].parent_term, "iron oxide");
  EXPECT_EQ(r.frequency.at("nanocapsules"), 2u);
  EXPECT_EQ(r.frequency.at("ironoxide"), 1u);
  // "quantum dots" is a base term, so it is never a candidate.
  Corpus dots = MakeCorpus({{"quantum dots"}});
  EXPECT_TRUE(GenerateVariants(base, dots).candidates.empty());
}

TEST(VocabularyTest, DuplicateSurfaceIsAnError) {
  EXPECT_THROW(Vocabulary({Base("gold", Label::kMaterial), Base("gold", Label::kEvent)}),
               DataError);
  EXPECT_THROW(Vocabulary({Base("", Label::kMaterial)}), DataError);
  Vocabulary v({Base("b", Label::kEvent), Base("a", Label::kEvent),
                Base("c", Label::kMaterial)});
  EXPECT_EQ(v.Surfaces(Label::kEvent), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(v.Find("c")->label, Label::kMaterial);
  EXPECT_EQ(v.Find("zz"), nullptr);
}

TEST(TermCsvTest, RoundTrip) {
  std::vector<TermEntry> entries = {Base("gold, \"au\"", Label::kMaterial, "M:1"),
                                    Variant("golds", Label::kMaterial, "gold")};
  std::ostringstream out;
  WriteTermCsv(entries, out);
  std::istringstream in(out.str());
  EXPECT_EQ(ReadTermCsv(in, "mem"), entries);
  std::istringstream bad("surface,label,origin,parent_term,concept_key\nx,Event,guess,,\n");
  EXPECT_THROW(ReadTermCsv(bad, "mem"), DataError);
}

TEST(LedgerTest, JsonRoundTripAndErrors) {
  CurationDecision d = Decide("dendrimer", CurationAction::kRelabel,
                              "2026-01-02T03:04:05Z", Label::kNanoparticle);
  d.note = "moved";
  EXPECT_EQ(DecisionToJsonLine(d),
            "{\"surface\":\"dendrimer\",\"action\":\"relabel\",\"to_label\":"
            "\"Nanoparticle\",\"actor\":\"expert\",\"timestamp\":"
            "\"2026-01-02T03:04:05Z\",\"note\":\"moved\"}");
  EXPECT_EQ(DecisionFromJson(DecisionToJsonLine(d), "mem"), d);
  EXPECT_THROW(DecisionFromJson("{\"surface\":\"x\",\"action\":\"relabel\","
                                "\"timestamp\":\"t\"}",
                                "mem"),
               DataError);
  EXPECT_THROW(DecisionFromJson("{\"surface\":\"x\",\"action\":\"maybe\","
                                "\"timestamp\":\"t\"}",
                                "mem"),
               DataError);
  std::istringstream in("\n" + DecisionToJsonLine(d) + "\n{bad\n");
  try {
    ReadLedger(in, "ledger");
    FAIL() << "expected DataError";
  } catch (const DataError &e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(LedgerTest, LatestDecisionWins) {
  std::vector<CurationDecision> ledger = {
      Decide("NanoCapsules", CurationAction::kAccept, "2026-01-02T00:00:00Z"),
      Decide("nanocapsules", CurationAction::kReject, "2026-01-01T00:00:00Z"),
      Decide("np", CurationAction::kReject, "2026-01-01T00:00:00Z"),
      Decide("np", CurationAction::kAccept, "2026-01-01T00:00:00Z")};
  auto eff = EffectiveDecisions(ledger);
  ASSERT_EQ(eff.size(), 2u);
  EXPECT_EQ(eff.at("nanocapsules").action, CurationAction::kAccept);
  EXPECT_EQ(eff.at("np").action, CurationAction::kAccept);
  ledger.push_back(Decide("x", CurationAction::kRelabel, "t", Label::kEvent));
  ledger.push_back(Decide("x", CurationAction::kRelabel, "t", Label::kMaterial));
  EXPECT_THROW(EffectiveDecisions(ledger), DataError);
}

TEST(ApplyCurationTest, DefaultsAcceptRejectAndRelabel) {
  std::vector<TermEntry> base = {Base("nanocapsule", Label::kNanoparticle),
                                 Base("dendrimer", Label::kMaterial),
                                 Base("silica", Label::kMaterial)};
  std::vector<TermEntry> candidates = {
      Variant("nanocapsules", Label::kNanoparticle, "nanocapsule"),
      Variant("dendrimers", Label::kMaterial, "dendrimer"),
      Variant("silicas", Label::kMaterial, "silica")};
  std::vector<CurationDecision> ledger = {
      Decide("nanocapsules", CurationAction::kAccept, "2026-01-01T00:00:00Z"),
      Decide("dendrimer", CurationAction::kRelabel, "2026-01-01T00:00:00Z",
             Label::kNanoparticle),
      Decide("dendrimers", CurationAction::kAccept, "2026-01-01T00:00:00Z"),
      Decide("unknown thing", CurationAction::kAccept, "2026-01-01T00:00:00Z")};
  CurationResult r = ApplyCuration(base, candidates, ledger);
  const Vocabulary &v = r.vocabulary;
  ASSERT_NE(v.Find("nanocapsules"), nullptr);
  EXPECT_EQ(v.Find("nanocapsules")->label, Label::kNanoparticle);
  EXPECT_EQ(v.Find("dendrimer")->label, Label::kNanoparticle);
  // An accepted variant follows its parent's final label.
  EXPECT_EQ(v.Find("dendrimers")->label, Label::kNanoparticle);
  EXPECT_EQ(v.Find("silicas"), nullptr);
  EXPECT_NE(v.Find("silica"), nullptr);
  EXPECT_EQ(v.size(), 5u);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("unknown thing"), std::string::npos);
}

TEST(ApplyCurationTest, RejectedParentPrunesVariant) {
  std::vector<TermEntry> base = {Base("gold", Label::kMaterial)};
  std::vector<TermEntry> candidates = {Variant("golds", Label::kMaterial, "gold")};
  std::vector<CurationDecision> ledger = {
      Decide("golds", CurationAction::kAccept, "2026-01-01T00:00:00Z"),
      Decide("gold", CurationAction::kReject, "2026-01-01T00:00:00Z")};
  EXPECT_TRUE(ApplyCuration(base, candidates, ledger).vocabulary.empty());
}

TEST(ApplyCurationTest, BaseUnderTwoLabelsNeedsADecision) {
  std::vector<TermEntry> base = {Base("dendrimer", Label::kMaterial),
                                 Base("dendrimer", Label::kNanoparticle)};
  EXPECT_THROW(ApplyCuration(base, {}, {}), DataError);
  CurationResult r = ApplyCuration(
      base, {},
      {Decide("dendrimer", CurationAction::kRelabel, "t", Label::kNanoparticle)});
  EXPECT_EQ(r.vocabulary.Find("dendrimer")->label, Label::kNanoparticle);
}

// Random base/candidate sets and ledgers; checks the curation invariants.
TEST(ApplyCurationPropertyTest, Invariants) {
  Rng rng(8);
  const std::vector<std::string> stems = {"gold", "silica", "dot", "assay", "cell",
                                          "rod", "shell", "zinc"};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<TermEntry> base, candidates;
    for (const std::string &s : stems) {
      if (rng.Uniform(3) == 0) continue;
      Label label = kAllLabels[rng.Uniform(kNumLabels)];
      base.push_back(Base(s, label));
      if (rng.Uniform(2)) candidates.push_back(Variant(s + "s", label, s));
    }
    std::vector<std::string> surfaces;
    for (const TermEntry &e : base) surfaces.push_back(e.surface);
    for (const TermEntry &e : candidates) surfaces.push_back(e.surface);
    std::vector<CurationDecision> ledger;
    const size_t n = rng.Uniform(12);
    for (size_t i = 0; i < n && !surfaces.empty(); ++i) {
      std::string surface = surfaces[rng.Uniform(surfaces.size())];
      CurationAction action = static_cast<CurationAction>(rng.Uniform(3));
      std::optional<Label> to;
      if (action == CurationAction::kRelabel) to = kAllLabels[rng.Uniform(kNumLabels)];
      ledger.push_back(Decide(surface, action, "2026-01-01T00:00:" +
                                                   std::to_string(10 + i) + "Z",
                              to));
    }
    CurationResult r = ApplyCuration(base, candidates, ledger);
    auto eff = EffectiveDecisions(ledger);
    for (const TermEntry &b : base) {
      auto it = eff.find(b.surface);
      bool rejected = it != eff.end() && it->second.action == CurationAction::kReject;
      EXPECT_EQ(r.vocabulary.Contains(b.surface), !rejected) << b.surface;
    }
    for (const TermEntry &c : candidates) {
      auto it = eff.find(c.surface);
      bool decided = it != eff.end() && it->second.action != CurationAction::kReject;
      if (!decided) {
        EXPECT_FALSE(r.vocabulary.Contains(c.surface));
      }
    }
    for (const TermEntry &e : r.vocabulary.entries()) {
      if (e.origin == TermOrigin::kVariant) {
        EXPECT_TRUE(r.vocabulary.Contains(e.parent_term)) << e.surface;
      }
    }
    CurationResult again = ApplyCuration(base, candidates, ledger);
    EXPECT_EQ(again.vocabulary.entries(), r.vocabulary.entries());
  }
}

TEST(VocabularyStatsTest, EmptyAndRecount) {
  std::vector<LabelStatsRow> empty = VocabularyStats(Vocabulary(), AnnotatedCorpus(), {});
  ASSERT_EQ(empty.size(), static_cast<size_t>(kNumLabels) + 1);
  for (const LabelStatsRow &row : empty) {
    EXPECT_EQ(row.terms, 0u);
    EXPECT_EQ(row.vocabulary, 0u);
    EXPECT_EQ(row.occurrences, 0u);
  }
  EXPECT_EQ(empty.back().label, "Total");

  Vocabulary v({Base("gold", Label::kMaterial), Variant("golds", Label::kMaterial, "gold"),
                Base("mitosis", Label::kEvent)});
  AnnotatedCorpus a =
      testing::AnnotateWith(v, MakeCorpus({{"gold and golds .", "Gold mitosis"}}));
  std::vector<LabelStatsRow> rows = VocabularyStats(v, a, {});
  uint64_t total = 0;
  for (const LabelStatsRow &row : rows) {
    if (row.label == "Material") {
      EXPECT_EQ(row.terms, 1u);
      EXPECT_EQ(row.vocabulary, 2u);
      EXPECT_EQ(row.occurrences, 3u);
    }
    if (row.label == "Event") {
      EXPECT_EQ(row.occurrences, 1u);
    }
    if (row.label != "Total") total += row.occurrences;
  }
  EXPECT_EQ(rows.back().occurrences, total);
  EXPECT_EQ(rows.back().vocabulary, 3u);
}

}  // namespace
}  // namespace dsner
