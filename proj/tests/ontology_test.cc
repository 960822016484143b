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


#include "dsner/ontology.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "dsner/error.h"
#include "dsner/rng.h"
#include "test_util.h"

namespace dsner {
namespace {

using testing::MakeCorpus;

Ontology Parse(const std::string &csv, OntologySource source = OntologySource::kNpo) {
  std::istringstream in(csv);
  return ParseOntologyCsv(in, source, "mem");
}

Concept MakeConcept(std::string key, std::string name,
                    std::optional<std::string> parent = std::nullopt,
                    std::vector<std::string> synonyms = {}) {
  Concept c;
  c.key = std::move(key);
  c.preferred_label = std::move(name);
  c.parent_key = std::move(parent);
  c.synonyms = std::move(synonyms);
  return c;
}

const char *kHeader = "key,label,definition,synonyms,parent_key\n";

TEST(OntologyCsvTest, RootWithTwoChildren) {
  Ontology o = Parse(std::string(kHeader) +
                     "N1,nanoparticle,,NP|nano particle,\n"
                     "N2,gold nanoparticle,\"gold, colloidal\",AuNP,N1\n"
                     "N3,quantum dot,,,N1\n");
  EXPECT_EQ(o.size(), 3u);
  EXPECT_EQ(o.Roots(), (std::vector<std::string>{"N1"}));
  EXPECT_EQ(o.Children("N1"), (std::vector<std::string>{"N2", "N3"}));
  EXPECT_TRUE(o.Children("N2").empty());
  EXPECT_EQ(o.Find("N1")->synonyms, (std::vector<std::string>{"NP", "nano particle"}));
  EXPECT_EQ(o.Find("N2")->definition, "gold, colloidal");
  EXPECT_EQ(o.Ancestors("N3"), (std::vector<std::string>{"N1"}));
  EXPECT_EQ(o.Find("N2")->LexicalForms(),
            (std::vector<std::string>{"gold nanoparticle", "AuNP"}));
}

TEST(OntologyCsvTest, Errors) {
  EXPECT_THROW(Parse(std::string(kHeader) + "A,a,,,A\n"), DataError);
  EXPECT_THROW(Parse(std::string(kHeader) + "A,a,,,B\nB,b,,,A\n"), DataError);
  EXPECT_THROW(Parse(std::string(kHeader) + "A,a,,,\nA,b,,,\n"), DataError);
  EXPECT_THROW(Parse("key,name\nA,a\n"), DataError);
  EXPECT_THROW(Parse(std::string(kHeader) + "A,a,,\n"), DataError);
}

TEST(OntologyCsvTest, DanglingParentBecomesRoot) {
  Ontology o = Parse(std::string(kHeader) + "A,a,,,MISSING\n");
  EXPECT_EQ(o.Roots(), (std::vector<std::string>{"A"}));
  ASSERT_EQ(o.dangling_parents().size(), 1u);
  EXPECT_EQ(o.dangling_parents()[0], "A -> MISSING");
}

TEST(OntologyCsvTest, WriteParseRoundTrip) {
  Ontology o = Parse(std::string(kHeader) +
                     "N1,nanoparticle,\"quoted \"\"x\"\"\",NP|nano particle,\n"
                     "N2,gold,,,N1\n");
  std::ostringstream out;
  WriteOntologyCsv(o, out);
  Ontology back = Parse(out.str());
  std::ostringstream again;
  WriteOntologyCsv(back, again);
  EXPECT_EQ(out.str(), again.str());
}

TEST(CountOccurrencesTest, ToyCorpus) {
  Ontology o = Ontology::FromConcepts(
      {MakeConcept("G", "gold"), MakeConcept("GN", "gold nanoparticle", "G"),
       MakeConcept("X", "absent"), MakeConcept("S", "silver", std::nullopt, {"Ag"})},
      OntologySource::kNpo);
  Corpus c = MakeCorpus({{"Gold nanoparticle of gold.", "gold gold", "AG and silver"}});
  OccurrenceIndex idx = CountOccurrences(o, c);
  EXPECT_EQ(idx.at("G"), 4u);
  EXPECT_EQ(idx.at("GN"), 1u);
  EXPECT_EQ(idx.at("X"), 0u);
  EXPECT_EQ(idx.at("S"), 2u);
}

TEST(CountOccurrencesTest, AgreesWithSubstringScan) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    testing::AnnotatorCase c = testing::RandomAnnotatorCase(rng);
    std::vector<Concept> concepts;
    for (size_t i = 0; i < c.vocabulary.size(); ++i) {
      concepts.push_back(
          MakeConcept("K" + std::to_string(i), c.vocabulary.entries()[i].surface));
    }
    // Shared synonym across two concepts counts for both.
    if (concepts.size() >= 2) concepts[1].synonyms.push_back("gold");
    Ontology o = Ontology::FromConcepts(concepts, OntologySource::kNpo);
    Corpus corpus;
    corpus.documents.push_back({"d", {c.sentence}});
    OccurrenceIndex idx = CountOccurrences(o, corpus);
    for (const Concept &k : concepts) {
      size_t want = 0;
      std::set<std::vector<std::string>> forms;
      for (const std::string &f : k.LexicalForms()) forms.insert(TermWords(f));
      for (const auto &words : forms) {
        want += testing::CountWordRuns(c.sentence.tokens, words);
      }
      EXPECT_EQ(idx.at(k.key), want) << c.sentence.text << " / " << k.key;
    }
  }
}

TEST(ReduceTest, ChainSkipsUnattestedMiddle) {
  Ontology o = Ontology::FromConcepts(
      {MakeConcept("A", "a"), MakeConcept("B", "b", "A"), MakeConcept("C", "c", "B")},
      OntologySource::kNpo);
  ReducedOntology r = Reduce(o, {{"A", 1}, {"B", 0}, {"C", 1}});
  EXPECT_EQ(r.ontology.size(), 2u);
  EXPECT_EQ(r.ontology.ParentOf("C"), "A");
  EXPECT_FALSE(r.Retained("B"));
  EXPECT_TRUE(r.Known("B"));
  EXPECT_EQ(r.retained_from, 3u);
  EXPECT_EQ(r.OriginalAncestors("C"), (std::vector<std::string>{"B", "A"}));
}

TEST(ReduceTest, AllZeroIsEmpty) {
  Ontology o = Ontology::FromConcepts({MakeConcept("A", "a"), MakeConcept("B", "b", "A")},
                                      OntologySource::kNpo);
  EXPECT_EQ(Reduce(o, {{"A", 0}, {"B", 0}}).ontology.size(), 0u);
  EXPECT_EQ(Reduce(o, {}).ontology.size(), 0u);
}

// Random forest of n concepts; parent index always smaller, so acyclic.
Ontology RandomForest(Rng &rng, size_t n) {
  std::vector<Concept> concepts;
  for (size_t i = 0; i < n; ++i) {
    std::optional<std::string> parent;
    if (i > 0 && rng.Uniform(5) != 0) parent = "K" + std::to_string(rng.Uniform(i));
    concepts.push_back(MakeConcept("K" + std::to_string(i), "t" + std::to_string(i),
                                   parent));
  }
  return Ontology::FromConcepts(concepts, OntologySource::kEnm);
}

bool IsSubsequence(const std::vector<std::string> &sub,
                   const std::vector<std::string> &seq) {
  size_t j = 0;
  for (const std::string &s : seq) {
    if (j < sub.size() && sub[j] == s) ++j;
  }
  return j == sub.size();
}

TEST(ReducePropertyTest, SupportAncestorsAndIdempotence) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 1 + rng.Uniform(100);
    Ontology o = RandomForest(rng, n);
    OccurrenceIndex occ;
    for (const auto &[key, c] : o.concepts()) occ[key] = rng.Uniform(3);
    ReducedOntology r = Reduce(o, occ);
    std::set<std::string> support, retained;
    for (const auto &[key, count] : occ) {
      if (count > 0) support.insert(key);
    }
    for (const auto &[key, c] : r.ontology.concepts()) retained.insert(key);
    ASSERT_EQ(retained, support);
    for (const std::string &key : retained) {
      std::vector<std::string> now = r.ontology.Ancestors(key);
      EXPECT_TRUE(IsSubsequence(now, o.Ancestors(key)));
      // The new parent is the nearest retained original ancestor.
      std::optional<std::string> nearest;
      for (const std::string &a : o.Ancestors(key)) {
        if (support.count(a)) {
          nearest = a;
          break;
        }
      }
      EXPECT_EQ(r.ontology.ParentOf(key), nearest);
    }
    ReducedOntology again = Reduce(r.ontology, r.occurrence_index);
    ASSERT_EQ(again.ontology.size(), r.ontology.size());
    for (const auto &[key, c] : r.ontology.concepts()) {
      EXPECT_EQ(again.ontology.ParentOf(key), r.ontology.ParentOf(key));
    }
  }
}

// Level-order reference for depth and width.
SubtreeStats LevelOrderStats(
    const std::map<std::string, std::optional<std::string>> &parents) {
  std::map<std::string, std::vector<std::string>> children;
  std::deque<std::string> level;
  for (const auto &[node, parent] : parents) {
    if (parent) {
      children[*parent].push_back(node);
    } else {
      level.push_back(node);
    }
  }
  SubtreeStats s;
  while (!level.empty()) {
    ++s.depth;
    s.width = std::max(s.width, static_cast<int>(level.size()));
    std::deque<std::string> next;
    for (const std::string &n : level) {
      for (const std::string &c : children[n]) next.push_back(c);
    }
    level = std::move(next);
  }
  return s;
}

TEST(ForestStatsTest, RootWithTwoChildren) {
  SubtreeStats s = ComputeForestStats({{"r", std::nullopt}, {"a", "r"}, {"b", "r"}});
  EXPECT_EQ(s, (SubtreeStats{2, 2}));
  EXPECT_EQ(ComputeForestStats({}), (SubtreeStats{0, 0}));
}

TEST(ForestStatsTest, AgreesWithLevelOrder) {
  Rng rng(123);
  for (int trial = 0; trial < 300; ++trial) {
    Ontology o = RandomForest(rng, 1 + rng.Uniform(100));
    std::map<std::string, std::optional<std::string>> parents;
    for (const auto &[key, c] : o.concepts()) parents[key] = o.ParentOf(key);
    EXPECT_EQ(ComputeForestStats(parents), LevelOrderStats(parents));
  }
}

TEST(RootAssignmentTest, Parse) {
  std::istringstream in(
      "{\"label\":\"Nanoparticle\",\"roots\":[\"N1\"],\"source_priority\":[\"NPO\",\"ENM\"]}\n"
      "{\"label\":\"Event\",\"roots\":[\"E1\",\"E2\"]}\n");
  std::vector<RootAssignment> a = ParseRootAssignments(in, "mem");
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[1].label, Label::kEvent);
  EXPECT_EQ(a[1].roots.size(), 2u);
  std::istringstream bad("{\"label\":\"Gene\",\"roots\":[]}\n");
  EXPECT_THROW(ParseRootAssignments(bad, "mem"), DataError);
}

std::map<OntologySource, ReducedOntology> Sources(const Ontology &npo,
                                                  const Ontology &enm) {
  auto all = [](const Ontology &o) {
    OccurrenceIndex occ;
    for (const auto &[k, c] : o.concepts()) occ[k] = 1;
    return Reduce(o, occ);
  };
  return {{OntologySource::kNpo, all(npo)}, {OntologySource::kEnm, all(enm)}};
}

const LabelSubtree &Subtree(const std::vector<LabelSubtree> &trees, Label label) {
  for (const LabelSubtree &t : trees) {
    if (t.label == label) return t;
  }
  throw std::runtime_error("no subtree");
}

TEST(ExtractSubtreesTest, NpoPlacementWinsOverEnm) {
  Ontology npo = Ontology::FromConcepts(
      {MakeConcept("NP", "nanoparticle"), MakeConcept("DOT", "quantum dot", "NP")},
      OntologySource::kNpo);
  Ontology enm = Ontology::FromConcepts(
      {MakeConcept("MAT", "material"), MakeConcept("DOT", "quantum dot", "MAT"),
       MakeConcept("SI", "silica", "MAT")},
      OntologySource::kEnm);
  std::vector<RootAssignment> roots(2);
  roots[0].label = Label::kNanoparticle;
  roots[0].roots = {"NP"};
  roots[1].label = Label::kMaterial;
  roots[1].roots = {"MAT"};
  std::vector<LabelSubtree> trees = ExtractLabelSubtrees(Sources(npo, enm), roots);
  const LabelSubtree &np = Subtree(trees, Label::kNanoparticle);
  const LabelSubtree &mat = Subtree(trees, Label::kMaterial);
  ASSERT_EQ(np.concepts.size(), 2u);
  EXPECT_EQ(np.stats, (SubtreeStats{2, 1}));
  std::set<std::string> mat_keys;
  for (const LabelConcept &c : mat.concepts) mat_keys.insert(c.node.key);
  EXPECT_EQ(mat_keys, (std::set<std::string>{"MAT", "SI"}));
}

TEST(ExtractSubtreesTest, UnknownRootIsAnError) {
  Ontology npo = Ontology::FromConcepts({MakeConcept("A", "a")}, OntologySource::kNpo);
  std::vector<RootAssignment> roots(1);
  roots[0].roots = {"NOPE"};
  EXPECT_THROW(ExtractLabelSubtrees(Sources(npo, Ontology()), roots), DataError);
}

TEST(ExtractSubtreesTest, ReducedAwayRootStillSelectsDescendants) {
  Ontology npo = Ontology::FromConcepts(
      {MakeConcept("R", "root"), MakeConcept("C", "child", "R")}, OntologySource::kNpo);
  std::map<OntologySource, ReducedOntology> sources;
  sources[OntologySource::kNpo] = Reduce(npo, {{"R", 0}, {"C", 2}});
  sources[OntologySource::kEnm] = Reduce(Ontology(), {});
  std::vector<RootAssignment> roots(1);
  roots[0].label = Label::kEvent;
  roots[0].roots = {"R"};
  std::vector<LabelSubtree> trees = ExtractLabelSubtrees(sources, roots);
  const LabelSubtree &t = Subtree(trees, Label::kEvent);
  ASSERT_EQ(t.concepts.size(), 1u);
  EXPECT_EQ(t.concepts[0].node.key, "C");
  EXPECT_EQ(t.concepts[0].forms, (std::vector<std::string>{"child"}));
}

}  // namespace
}  // namespace dsner
