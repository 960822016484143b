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


#ifndef DSNER_ONTOLOGY_H_
#define DSNER_ONTOLOGY_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsner/corpus.h"
#include "dsner/labels.h"
#include "dsner/text.h"

namespace dsner {

enum class OntologySource { kNpo, kEnm };

std::string_view SourceName(OntologySource source);
std::optional<OntologySource> ParseSource(std::string_view name);

struct Concept {
  std::string key;
  std::string preferred_label;
  std::string definition;
  std::vector<std::string> synonyms;
  std::optional<std::string> parent_key;
  OntologySource source = OntologySource::kNpo;

  // Preferred label followed by synonyms, raw.
  std::vector<std::string> LexicalForms() const;
};

// A concept forest keyed by concept key.
class Ontology {
 public:
  Ontology() = default;

  // Validates key uniqueness and acyclicity; throws DataError otherwise.
  // Parents that name no concept are recorded in dangling_parents() and the
  // concept is treated as a root.
  static Ontology FromConcepts(std::vector<Concept> concepts,
                               OntologySource source);

  OntologySource source() const { return source_; }
  const std::map<std::string, Concept> &concepts() const { return concepts_; }
  size_t size() const { return concepts_.size(); }
  const Concept *Find(std::string_view key) const;

  // Parent inside this ontology (nullopt for roots and dangling parents).
  std::optional<std::string> ParentOf(std::string_view key) const;
  std::vector<std::string> Roots() const;
  std::vector<std::string> Children(std::string_view key) const;
  // Keys from the concept up to its root, excluding the concept itself.
  std::vector<std::string> Ancestors(std::string_view key) const;

  // "<child> -> <missing parent>" entries.
  const std::vector<std::string> &dangling_parents() const {
    return dangling_;
  }

 private:
  OntologySource source_ = OntologySource::kNpo;
  std::map<std::string, Concept> concepts_;
  std::map<std::string, std::vector<std::string>> children_;
  std::vector<std::string> dangling_;
};

// CSV with header key,label,definition,synonyms,parent_key; synonyms are
// '|' separated and an empty parent_key marks a root.
Ontology ParseOntologyCsv(std::istream &in, OntologySource source,
                          std::string_view name);
Ontology ParseOntologyCsv(const std::filesystem::path &path,
                          OntologySource source);
void WriteOntologyCsv(const Ontology &ontology, std::ostream &out);

// Concept key -> raw corpus frequency.
using OccurrenceIndex = std::map<std::string, uint64_t>;

// Counts every hit of every lexical form independently; overlapping hits
// all count. Forms shared by two concepts count for both.
OccurrenceIndex CountOccurrences(const Ontology &ontology, const Corpus &corpus,
                                 const NormalizeOptions &options = {});

void WriteOccurrenceIndex(const OccurrenceIndex &index, std::ostream &out);
OccurrenceIndex ReadOccurrenceIndex(std::istream &in, std::string_view name);

struct ReducedOntology {
  Ontology ontology;  // retained concepts with rewritten parents
  size_t retained_from = 0;
  OccurrenceIndex occurrence_index;
  // Parent of every original concept before reduction.
  std::map<std::string, std::optional<std::string>> original_parent;

  bool Retained(std::string_view key) const {
    return ontology.Find(key) != nullptr;
  }
  bool Known(std::string_view key) const {
    return original_parent.count(std::string(key)) > 0;
  }
  // Original ancestors (nearest first), excluding `key`.
  std::vector<std::string> OriginalAncestors(std::string_view key) const;
};

// Keeps concepts with occurrence >= 1 and reattaches each to its nearest
// retained ancestor, or makes it a root when none is left.
ReducedOntology Reduce(const Ontology &ontology,
                       const OccurrenceIndex &occurrences);

struct SubtreeStats {
  int depth = 0;  // nodes on the longest root-to-leaf path
  int width = 0;  // most nodes on any single level

  friend bool operator==(const SubtreeStats &, const SubtreeStats &) = default;
};

// Stats of a forest given as node -> optional parent. Every parent must be
// a node of the map.
SubtreeStats ComputeForestStats(
    const std::map<std::string, std::optional<std::string>> &parents);

struct RootAssignment {
  Label label = Label::kNanoparticle;
  std::vector<std::string> roots;
  std::vector<OntologySource> source_priority = {OntologySource::kNpo,
                                                 OntologySource::kEnm};
};

// jsonl: {"label", "roots": [...], "source_priority": ["NPO","ENM"]}.
std::vector<RootAssignment> ParseRootAssignments(std::istream &in,
                                                 std::string_view name);

struct LabelConcept {
  Concept node;  // taken from the highest-priority source holding it
  std::optional<std::string> parent;  // within the label forest
  std::vector<std::string> forms;     // normalized, conflict-filtered
};

struct LabelSubtree {
  Label label = Label::kNanoparticle;
  std::vector<LabelConcept> concepts;  // sorted by key
  SubtreeStats stats;
};

// Collects each label's root concepts and their retained descendants from
// every source. A concept key claimed by a higher-priority source keeps
// only that source's label placement; a lexical form claimed by a
// higher-priority concept is dropped from lower-priority concepts under
// other labels. A root that was itself reduced away still selects its
// retained descendants. Throws DataError when a root key is unknown to
// every source.
std::vector<LabelSubtree> ExtractLabelSubtrees(
    const std::map<OntologySource, ReducedOntology> &sources,
    const std::vector<RootAssignment> &assignments,
    const NormalizeOptions &options = {});

}  // namespace dsner

#endif  // DSNER_ONTOLOGY_H_
