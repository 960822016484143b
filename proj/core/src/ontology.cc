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

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "dsner/csv.h"
#include "dsner/error.h"
#include "dsner/phrase_automaton.h"
#include "json.hpp"

namespace dsner {

namespace {

const std::vector<std::string> kOntologyHeader = {"key", "label", "definition",
                                                  "synonyms", "parent_key"};

}  // namespace

std::string_view SourceName(OntologySource source) {
  return source == OntologySource::kNpo ? "NPO" : "ENM";
}

std::optional<OntologySource> ParseSource(std::string_view name) {
  if (name == "NPO") return OntologySource::kNpo;
  if (name == "ENM") return OntologySource::kEnm;
  return std::nullopt;
}

std::vector<std::string> Concept::LexicalForms() const {
  std::vector<std::string> forms;
  forms.push_back(preferred_label);
  forms.insert(forms.end(), synonyms.begin(), synonyms.end());
  return forms;
}

Ontology Ontology::FromConcepts(std::vector<Concept> concepts,
                                OntologySource source) {
  Ontology o;
  o.source_ = source;
  for (Concept &c : concepts) {
    if (c.key.empty()) throw DataError("concept with empty key");
    c.source = source;
    std::string key = c.key;
    if (!o.concepts_.emplace(key, std::move(c)).second) {
      throw DataError("duplicate concept key '" + key + "'");
    }
  }
  for (const auto &[key, c] : o.concepts_) {
    if (!c.parent_key) continue;
    if (!o.concepts_.count(*c.parent_key)) {
      o.dangling_.push_back(key + " -> " + *c.parent_key);
      continue;
    }
    o.children_[*c.parent_key].push_back(key);
  }

  // Cycle detection: colour nodes while following parent chains.
  std::map<std::string, int> state;  // 1 = on current path, 2 = done
  for (const auto &[start, unused] : o.concepts_) {
    std::vector<std::string> path;
    std::string key = start;
    while (true) {
      int &s = state[key];
      if (s == 2) break;
      if (s == 1) {
        auto it = std::find(path.begin(), path.end(), key);
        std::string cycle;
        for (; it != path.end(); ++it) cycle += *it + " -> ";
        throw DataError("cycle in parent chain: " + cycle + key);
      }
      s = 1;
      path.push_back(key);
      auto parent = o.ParentOf(key);
      if (!parent) break;
      key = *parent;
    }
    for (const std::string &k : path) state[k] = 2;
  }
  return o;
}

const Concept *Ontology::Find(std::string_view key) const {
  auto it = concepts_.find(std::string(key));
  return it == concepts_.end() ? nullptr : &it->second;
}

std::optional<std::string> Ontology::ParentOf(std::string_view key) const {
  const Concept *c = Find(key);
  if (!c || !c->parent_key || !concepts_.count(*c->parent_key)) {
    return std::nullopt;
  }
  return c->parent_key;
}

std::vector<std::string> Ontology::Roots() const {
  std::vector<std::string> roots;
  for (const auto &[key, c] : concepts_) {
    if (!ParentOf(key)) roots.push_back(key);
  }
  return roots;
}

std::vector<std::string> Ontology::Children(std::string_view key) const {
  auto it = children_.find(std::string(key));
  return it == children_.end() ? std::vector<std::string>{} : it->second;
}

std::vector<std::string> Ontology::Ancestors(std::string_view key) const {
  std::vector<std::string> chain;
  for (auto p = ParentOf(key); p; p = ParentOf(*p)) chain.push_back(*p);
  return chain;
}

Ontology ParseOntologyCsv(std::istream &in, OntologySource source,
                          std::string_view name) {
  std::vector<Concept> concepts;
  for (auto &row : ReadCsvWithHeader(in, kOntologyHeader, name)) {
    Concept c;
    c.key = row[0];
    c.preferred_label = row[1];
    c.definition = row[2];
    if (!row[3].empty()) {
      for (std::string &s : Split(row[3], '|')) {
        if (!s.empty()) c.synonyms.push_back(std::move(s));
      }
    }
    if (!row[4].empty()) c.parent_key = row[4];
    concepts.push_back(std::move(c));
  }
  try {
    return Ontology::FromConcepts(std::move(concepts), source);
  } catch (const DataError &e) {
    throw DataError(std::string(name) + ": " + e.what());
  }
}

Ontology ParseOntologyCsv(const std::filesystem::path &path,
                          OntologySource source) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open ontology file " + path.string());
  return ParseOntologyCsv(in, source, path.string());
}

void WriteOntologyCsv(const Ontology &ontology, std::ostream &out) {
  WriteCsvRow(out, kOntologyHeader);
  for (const auto &[key, c] : ontology.concepts()) {
    WriteCsvRow(out, {c.key, c.preferred_label, c.definition,
                      Join(c.synonyms, "|"), c.parent_key.value_or("")});
  }
}

OccurrenceIndex CountOccurrences(const Ontology &ontology, const Corpus &corpus,
                                 const NormalizeOptions &options) {
  PhraseAutomaton automaton;
  std::vector<std::vector<std::string>> pattern_concepts;
  OccurrenceIndex index;
  for (const auto &[key, c] : ontology.concepts()) {
    index[key] = 0;
    std::set<int> seen;
    for (const std::string &form : c.LexicalForms()) {
      std::vector<std::string> words = TermWords(form, options);
      if (words.empty()) continue;
      int id = automaton.Add(words);
      if (!seen.insert(id).second) continue;
      if (pattern_concepts.size() <= static_cast<size_t>(id)) {
        pattern_concepts.resize(id + 1);
      }
      pattern_concepts[id].push_back(key);
    }
  }
  automaton.Build();
  std::vector<uint64_t> hits(pattern_concepts.size(), 0);
  corpus.ForEachSentence([&](const Sentence &s) {
    for (const auto &hit : automaton.FindAll(s.tokens, options)) {
      ++hits[hit.pattern];
    }
  });
  for (size_t p = 0; p < pattern_concepts.size(); ++p) {
    for (const std::string &key : pattern_concepts[p]) index[key] += hits[p];
  }
  return index;
}

void WriteOccurrenceIndex(const OccurrenceIndex &index, std::ostream &out) {
  WriteCsvRow(out, {"key", "count"});
  for (const auto &[key, count] : index) {
    WriteCsvRow(out, {key, std::to_string(count)});
  }
}

OccurrenceIndex ReadOccurrenceIndex(std::istream &in, std::string_view name) {
  OccurrenceIndex index;
  for (auto &row : ReadCsvWithHeader(in, {"key", "count"}, name)) {
    try {
      index[row[0]] = std::stoull(row[1]);
    } catch (const std::exception &) {
      throw DataError(std::string(name) + ": bad count for '" + row[0] + "'");
    }
  }
  return index;
}

std::vector<std::string> ReducedOntology::OriginalAncestors(
    std::string_view key) const {
  std::vector<std::string> chain;
  auto it = original_parent.find(std::string(key));
  while (it != original_parent.end() && it->second) {
    chain.push_back(*it->second);
    it = original_parent.find(*it->second);
  }
  return chain;
}

ReducedOntology Reduce(const Ontology &ontology,
                       const OccurrenceIndex &occurrences) {
  ReducedOntology reduced;
  reduced.retained_from = ontology.size();
  auto occ = [&](const std::string &key) -> uint64_t {
    auto it = occurrences.find(key);
    return it == occurrences.end() ? 0 : it->second;
  };
  std::vector<Concept> kept;
  for (const auto &[key, c] : ontology.concepts()) {
    reduced.original_parent[key] = ontology.ParentOf(key);
    reduced.occurrence_index[key] = occ(key);
    if (occ(key) == 0) continue;
    Concept copy = c;
    copy.parent_key.reset();
    for (const std::string &a : ontology.Ancestors(key)) {
      if (occ(a) > 0) {
        copy.parent_key = a;
        break;
      }
    }
    kept.push_back(std::move(copy));
  }
  reduced.ontology = Ontology::FromConcepts(std::move(kept), ontology.source());
  return reduced;
}

SubtreeStats ComputeForestStats(
    const std::map<std::string, std::optional<std::string>> &parents) {
  SubtreeStats stats;
  std::map<std::string, int> level;
  std::map<int, int> per_level;
  for (const auto &[node, unused] : parents) {
    // Walk up to the first node with a known level.
    std::vector<std::string> path;
    std::string cur = node;
    int base = 0;
    while (true) {
      auto known = level.find(cur);
      if (known != level.end()) {
        base = known->second;
        break;
      }
      path.push_back(cur);
      const auto &p = parents.at(cur);
      if (!p) break;
      cur = *p;
    }
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      level[*it] = ++base;
      ++per_level[base];
    }
  }
  for (const auto &[lvl, count] : per_level) {
    stats.depth = std::max(stats.depth, lvl);
    stats.width = std::max(stats.width, count);
  }
  return stats;
}

std::vector<RootAssignment> ParseRootAssignments(std::istream &in,
                                                 std::string_view name) {
  std::vector<RootAssignment> out;
  std::string line;
  size_t line_no = 0;
  std::set<Label> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string where = std::string(name) + ": line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
      throw DataError(where + ": malformed JSON");
    }
    if (!j.is_object() || !j.contains("label") || !j["label"].is_string() ||
        !j.contains("roots") || !j["roots"].is_array()) {
      throw DataError(where + ": expected {\"label\", \"roots\": [...]}");
    }
    RootAssignment a;
    a.label = ParseLabelOrThrow(j["label"].get<std::string>(), where);
    if (!seen.insert(a.label).second) {
      throw DataError(where + ": duplicate label " +
                      std::string(LabelName(a.label)));
    }
    for (const auto &r : j["roots"]) {
      if (!r.is_string()) throw DataError(where + ": root keys must be strings");
      a.roots.push_back(r.get<std::string>());
    }
    if (j.contains("source_priority")) {
      a.source_priority.clear();
      for (const auto &s : j["source_priority"]) {
        auto src = s.is_string() ? ParseSource(s.get<std::string>())
                                 : std::nullopt;
        if (!src) throw DataError(where + ": unknown source in source_priority");
        a.source_priority.push_back(*src);
      }
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<LabelSubtree> ExtractLabelSubtrees(
    const std::map<OntologySource, ReducedOntology> &sources,
    const std::vector<RootAssignment> &assignments,
    const NormalizeOptions &options) {
  if (assignments.empty()) return {};
  const std::vector<OntologySource> &priority = assignments[0].source_priority;
  for (const RootAssignment &a : assignments) {
    if (a.source_priority != priority) {
      throw DataError("label " + std::string(LabelName(a.label)) +
                      ": source_priority differs from other labels");
    }
  }
  std::vector<const ReducedOntology *> ranked;
  for (OntologySource s : priority) {
    auto it = sources.find(s);
    if (it != sources.end()) ranked.push_back(&it->second);
  }

  // Per source rank: concept key -> labels whose subtree contains it.
  std::vector<std::map<std::string, std::set<Label>>> claims(ranked.size());
  for (const RootAssignment &a : assignments) {
    std::set<std::string> roots(a.roots.begin(), a.roots.end());
    for (const std::string &root : a.roots) {
      bool known = std::any_of(ranked.begin(), ranked.end(),
                               [&](const ReducedOntology *r) {
                                 return r->Known(root);
                               });
      if (!known) {
        throw DataError("label " + std::string(LabelName(a.label)) +
                        ": unknown root concept '" + root + "'");
      }
    }
    for (size_t rank = 0; rank < ranked.size(); ++rank) {
      for (const auto &[key, c] : ranked[rank]->ontology.concepts()) {
        bool member = roots.count(key) > 0;
        if (!member) {
          for (const std::string &anc : ranked[rank]->OriginalAncestors(key)) {
            if (roots.count(anc)) {
              member = true;
              break;
            }
          }
        }
        if (member) claims[rank][key].insert(a.label);
      }
    }
  }

  // Each key is owned by the best-ranked source that places it anywhere.
  std::map<std::string, size_t> owner;
  for (size_t rank = 0; rank < ranked.size(); ++rank) {
    for (const auto &[key, labels] : claims[rank]) owner.emplace(key, rank);
  }

  // Lexical forms: best rank among owning concepts, and the labels that
  // concepts of that rank give the form.
  struct FormClaim {
    size_t rank;
    std::set<Label> labels;
  };
  std::map<std::string, FormClaim> form_claims;
  std::map<std::string, std::vector<std::string>> key_forms;
  for (const auto &[key, rank] : owner) {
    const Concept *c = ranked[rank]->ontology.Find(key);
    std::vector<std::string> forms;
    for (const std::string &raw : c->LexicalForms()) {
      std::string f = Normalize(raw, options);
      if (f.empty() || std::find(forms.begin(), forms.end(), f) != forms.end()) {
        continue;
      }
      forms.push_back(f);
      const std::set<Label> &labels = claims[rank][key];
      auto [it, inserted] = form_claims.emplace(f, FormClaim{rank, labels});
      if (!inserted) {
        if (rank < it->second.rank) {
          it->second = FormClaim{rank, labels};
        } else if (rank == it->second.rank) {
          it->second.labels.insert(labels.begin(), labels.end());
        }
      }
    }
    key_forms[key] = std::move(forms);
  }

  std::vector<LabelSubtree> result;
  for (const RootAssignment &a : assignments) {
    std::set<std::string> roots(a.roots.begin(), a.roots.end());
    std::set<std::string> members;
    for (const auto &[key, rank] : owner) {
      if (claims[rank][key].count(a.label)) members.insert(key);
    }
    LabelSubtree subtree;
    subtree.label = a.label;
    std::map<std::string, std::optional<std::string>> parents;
    for (const std::string &key : members) {
      const ReducedOntology *src = ranked[owner[key]];
      LabelConcept lc;
      lc.node = *src->ontology.Find(key);
      if (!roots.count(key)) {
        for (const std::string &anc : src->OriginalAncestors(key)) {
          if (members.count(anc)) {
            lc.parent = anc;
            break;
          }
          if (roots.count(anc)) break;
        }
      }
      for (const std::string &f : key_forms[key]) {
        const FormClaim &claim = form_claims[f];
        if (claim.rank == owner[key] || claim.labels.count(a.label)) {
          lc.forms.push_back(f);
        }
      }
      parents[key] = lc.parent;
      subtree.concepts.push_back(std::move(lc));
    }
    // Parent links come from a single source chain per key; guard anyway.
    for (const auto &[key, parent] : parents) {
      std::set<std::string> seen{key};
      for (auto p = parent; p; p = parents.at(*p)) {
        if (!seen.insert(*p).second) {
          throw DataError("label " + std::string(LabelName(a.label)) +
                          ": merged placement forms a cycle at '" + *p + "'");
        }
      }
    }
    subtree.stats = ComputeForestStats(parents);
    result.push_back(std::move(subtree));
  }
  return result;
}

}  // namespace dsner
