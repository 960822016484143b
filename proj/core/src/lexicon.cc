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

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>

#include "dsner/csv.h"
#include "dsner/error.h"
#include "dsner/phrase_automaton.h"
#include "dsner/spans.h"
#include "json.hpp"

namespace dsner {

namespace {

const std::vector<std::string> kTermHeader = {"surface", "label", "origin",
                                              "parent_term", "concept_key"};

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool StartsWith(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.compare(0, prefix.size(), prefix) == 0;
}

bool IsVowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

std::string Pluralize(const std::string &w) {
  if (EndsWith(w, "s") || EndsWith(w, "x") || EndsWith(w, "z") ||
      EndsWith(w, "ch") || EndsWith(w, "sh")) {
    return w + "es";
  }
  if (w.size() >= 2 && w.back() == 'y' && !IsVowel(w[w.size() - 2])) {
    return w.substr(0, w.size() - 1) + "ies";
  }
  return w + "s";
}

std::optional<std::string> Singularize(const std::string &w) {
  if (w.size() > 3 && EndsWith(w, "ies")) return w.substr(0, w.size() - 3) + "y";
  for (std::string_view s : {"ses", "xes", "zes", "ches", "shes"}) {
    if (w.size() > s.size() && EndsWith(w, s)) return w.substr(0, w.size() - 2);
  }
  if (w.size() > 2 && EndsWith(w, "s") && !EndsWith(w, "ss")) {
    return w.substr(0, w.size() - 1);
  }
  return std::nullopt;
}

// Adjective suffix -> noun suffix.
constexpr std::pair<std::string_view, std::string_view> kDerivation[] = {
    {"ular", "ule"}, {"ular", ""}, {"ical", "y"}, {"ical", "ics"},
    {"ic", ""},      {"ic", "y"},  {"al", ""},    {"al", "e"},
    {"ar", "us"},    {"ous", ""},
};

// British -> American, whole words.
constexpr std::pair<std::string_view, std::string_view> kSpellingWords[] = {
    {"aluminium", "aluminum"}, {"sulphur", "sulfur"},
    {"sulphate", "sulfate"},   {"sulphide", "sulfide"},
    {"caesium", "cesium"},     {"haemoglobin", "hemoglobin"},
    {"haemolysis", "hemolysis"}, {"oestrogen", "estrogen"},
    {"foetal", "fetal"},       {"grey", "gray"},
    {"tumour", "tumor"},       {"colour", "color"},
    {"fibre", "fiber"},        {"centre", "center"},
    {"litre", "liter"},        {"metre", "meter"},
    {"oesophagus", "esophagus"}, {"anaemia", "anemia"},
};

// British -> American, word suffixes.
constexpr std::pair<std::string_view, std::string_view> kSpellingSuffixes[] = {
    {"isation", "ization"}, {"isations", "izations"}, {"ise", "ize"},
    {"ised", "ized"},       {"ising", "izing"},       {"yse", "yze"},
    {"ysed", "yzed"},       {"our", "or"},            {"tre", "ter"},
    {"ogue", "og"},
};

// British -> American, word prefixes.
constexpr std::pair<std::string_view, std::string_view> kSpellingPrefixes[] = {
    {"haem", "hem"}, {"oes", "es"}, {"paed", "ped"},
};

std::vector<std::string> WordSpellings(const std::string &w) {
  std::vector<std::string> out;
  for (auto [gb, us] : kSpellingWords) {
    if (w == gb) out.emplace_back(us);
    if (w == us) out.emplace_back(gb);
  }
  for (auto [gb, us] : kSpellingSuffixes) {
    if (EndsWith(w, gb) && w.size() > gb.size() + 1) {
      out.push_back(w.substr(0, w.size() - gb.size()) + std::string(us));
    }
    if (EndsWith(w, us) && w.size() > us.size() + 1) {
      out.push_back(w.substr(0, w.size() - us.size()) + std::string(gb));
    }
  }
  for (auto [gb, us] : kSpellingPrefixes) {
    if (StartsWith(w, gb) && w.size() > gb.size() + 2) {
      out.push_back(std::string(us) + w.substr(gb.size()));
    }
    if (StartsWith(w, us) && w.size() > us.size() + 2) {
      out.push_back(std::string(gb) + w.substr(us.size()));
    }
  }
  return out;
}

void AddUnique(std::vector<std::string> &out, std::string candidate,
               const std::string &term) {
  if (candidate.empty() || candidate == term) return;
  if (std::find(out.begin(), out.end(), candidate) == out.end()) {
    out.push_back(std::move(candidate));
  }
}

std::vector<std::string> Words(const std::string &term) {
  std::vector<std::string> words;
  for (std::string &w : Split(term, ' ')) {
    if (!w.empty()) words.push_back(std::move(w));
  }
  return words;
}

}  // namespace

std::string_view TermOriginName(TermOrigin origin) {
  return origin == TermOrigin::kOntology ? "ontology" : "variant";
}

std::optional<TermOrigin> ParseTermOrigin(std::string_view name) {
  if (name == "ontology") return TermOrigin::kOntology;
  if (name == "variant") return TermOrigin::kVariant;
  return std::nullopt;
}

bool TermEntryLess(const TermEntry &a, const TermEntry &b) {
  if (a.label != b.label) return a.label < b.label;
  return a.surface < b.surface;
}

Vocabulary::Vocabulary(std::vector<TermEntry> entries)
    : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), TermEntryLess);
  for (size_t i = 0; i < entries_.size(); ++i) {
    const TermEntry &e = entries_[i];
    if (e.surface.empty()) throw DataError("vocabulary entry with empty surface");
    auto [it, inserted] = index_.emplace(e.surface, i);
    if (!inserted) {
      const TermEntry &other = entries_[it->second];
      throw DataError("surface '" + e.surface + "' appears under " +
                      std::string(LabelName(other.label)) + " and " +
                      std::string(LabelName(e.label)));
    }
  }
}

const TermEntry *Vocabulary::Find(std::string_view surface) const {
  auto it = index_.find(std::string(surface));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::vector<std::string> Vocabulary::Surfaces(Label label) const {
  std::vector<std::string> out;
  for (const TermEntry &e : entries_) {
    if (e.label == label) out.push_back(e.surface);
  }
  return out;
}

void WriteTermCsv(const std::vector<TermEntry> &entries, std::ostream &out) {
  WriteCsvRow(out, kTermHeader);
  for (const TermEntry &e : entries) {
    WriteCsvRow(out, {e.surface, std::string(LabelName(e.label)),
                      std::string(TermOriginName(e.origin)), e.parent_term,
                      e.concept_key});
  }
}

std::vector<TermEntry> ReadTermCsv(std::istream &in, std::string_view name) {
  std::vector<TermEntry> entries;
  for (auto &row : ReadCsvWithHeader(in, kTermHeader, name)) {
    TermEntry e;
    e.surface = row[0];
    e.label = ParseLabelOrThrow(row[1], name);
    auto origin = ParseTermOrigin(row[2]);
    if (!origin) {
      throw DataError(std::string(name) + ": unknown origin '" + row[2] + "'");
    }
    e.origin = *origin;
    e.parent_term = row[3];
    e.concept_key = row[4];
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<TermEntry> BaseTerms(const std::vector<LabelSubtree> &subtrees) {
  std::map<std::pair<Label, std::string>, TermEntry> unique;
  for (const LabelSubtree &subtree : subtrees) {
    for (const LabelConcept &lc : subtree.concepts) {
      for (const std::string &form : lc.forms) {
        TermEntry e{form, subtree.label, TermOrigin::kOntology, "",
                    lc.node.key};
        unique.emplace(std::make_pair(subtree.label, form), std::move(e));
      }
    }
  }
  std::vector<TermEntry> out;
  for (auto &[key, e] : unique) out.push_back(std::move(e));
  return out;
}

std::vector<std::string> InflectionVariants(const std::string &term) {
  std::vector<std::string> out;
  std::vector<std::string> words = Words(term);
  if (words.empty()) return out;
  std::string &head = words.back();
  std::string original = head;
  head = Pluralize(original);
  AddUnique(out, Join(words, " "), term);
  if (auto singular = Singularize(original)) {
    head = *singular;
    AddUnique(out, Join(words, " "), term);
  }
  return out;
}

std::vector<std::string> SpacingVariants(const std::string &term) {
  std::vector<std::string> out;
  std::vector<std::string> words = Words(term);
  for (size_t i = 0; i + 1 < words.size(); ++i) {
    std::vector<std::string> joined(words.begin(), words.begin() + i);
    joined.push_back(words[i] + words[i + 1]);
    joined.insert(joined.end(), words.begin() + i + 2, words.end());
    AddUnique(out, Join(joined, " "), term);
  }
  if (words.size() > 2) {
    std::string all;
    for (const std::string &w : words) all += w;
    AddUnique(out, all, term);
  }
  for (size_t i = 0; i < words.size(); ++i) {
    const std::string &w = words[i];
    if (w.size() < 6) continue;
    for (size_t cut = 3; cut + 3 <= w.size(); ++cut) {
      std::vector<std::string> split(words.begin(), words.begin() + i);
      split.push_back(w.substr(0, cut));
      split.push_back(w.substr(cut));
      split.insert(split.end(), words.begin() + i + 1, words.end());
      AddUnique(out, Join(split, " "), term);
    }
  }
  return out;
}

std::vector<std::string> PermutationVariants(const std::string &term) {
  std::vector<std::string> out;
  std::vector<std::string> words = Words(term);
  if (words.size() == 2) {
    // "molecular function" -> "function of molecule"
    const std::string &adj = words[0];
    for (auto [adj_suffix, noun_suffix] : kDerivation) {
      if (!EndsWith(adj, adj_suffix) || adj.size() <= adj_suffix.size() + 2) {
        continue;
      }
      std::string noun = adj.substr(0, adj.size() - adj_suffix.size()) +
                         std::string(noun_suffix);
      AddUnique(out, words[1] + " of " + noun, term);
    }
  } else if (words.size() == 3 && words[1] == "of") {
    // "function of molecule" -> "molecular function"
    const std::string &noun = words[2];
    for (auto [adj_suffix, noun_suffix] : kDerivation) {
      if (!EndsWith(noun, noun_suffix) || noun.size() <= noun_suffix.size() + 2) {
        continue;
      }
      std::string adj = noun.substr(0, noun.size() - noun_suffix.size()) +
                        std::string(adj_suffix);
      AddUnique(out, adj + " " + words[0], term);
    }
  }
  return out;
}

std::vector<std::string> SpellingVariants(const std::string &term) {
  std::vector<std::string> out;
  std::vector<std::string> words = Words(term);
  for (size_t i = 0; i < words.size(); ++i) {
    for (const std::string &alt : WordSpellings(words[i])) {
      std::vector<std::string> copy = words;
      copy[i] = alt;
      AddUnique(out, Join(copy, " "), term);
    }
  }
  return out;
}

std::vector<std::string> VariantCandidates(const std::string &term) {
  std::vector<std::string> out;
  for (auto rule : {InflectionVariants, SpacingVariants, PermutationVariants,
                    SpellingVariants}) {
    for (std::string &c : rule(term)) AddUnique(out, std::move(c), term);
  }
  return out;
}

VariantResult GenerateVariants(const std::vector<TermEntry> &base_terms,
                               const Corpus &corpus,
                               const NormalizeOptions &options) {
  std::vector<TermEntry> sorted = base_terms;
  std::sort(sorted.begin(), sorted.end(), TermEntryLess);
  std::set<std::string> base_surfaces;
  for (const TermEntry &e : sorted) base_surfaces.insert(e.surface);

  // First claimant wins for each candidate surface.
  std::map<std::string, TermEntry> proposed;
  PhraseAutomaton automaton;
  std::map<int, std::string> pattern_surface;
  for (const TermEntry &base : sorted) {
    for (std::string &raw : VariantCandidates(base.surface)) {
      std::string surface = Normalize(raw, options);
      if (surface.empty() || base_surfaces.count(surface) ||
          proposed.count(surface)) {
        continue;
      }
      TermEntry c{surface, base.label, TermOrigin::kVariant, base.surface,
                  base.concept_key};
      int id = automaton.Add(TermWords(surface, options));
      pattern_surface[id] = surface;
      proposed.emplace(surface, std::move(c));
    }
  }
  automaton.Build();

  std::map<std::string, uint64_t> hits;
  corpus.ForEachSentence([&](const Sentence &s) {
    for (const auto &hit : automaton.FindAll(s.tokens, options)) {
      ++hits[pattern_surface[hit.pattern]];
    }
  });

  VariantResult result;
  for (auto &[surface, entry] : proposed) {
    auto it = hits.find(surface);
    if (it == hits.end()) continue;
    result.frequency[surface] = it->second;
    result.candidates.push_back(entry);
  }
  std::sort(result.candidates.begin(), result.candidates.end(), TermEntryLess);
  return result;
}

std::string_view CurationActionName(CurationAction action) {
  switch (action) {
    case CurationAction::kAccept:
      return "accept";
    case CurationAction::kReject:
      return "reject";
    case CurationAction::kRelabel:
      return "relabel";
  }
  return "accept";
}

std::optional<CurationAction> ParseCurationAction(std::string_view name) {
  if (name == "accept") return CurationAction::kAccept;
  if (name == "reject") return CurationAction::kReject;
  if (name == "relabel") return CurationAction::kRelabel;
  return std::nullopt;
}

std::string DecisionToJsonLine(const CurationDecision &d) {
  nlohmann::ordered_json j;
  j["surface"] = d.surface;
  j["action"] = CurationActionName(d.action);
  if (d.to_label) j["to_label"] = LabelName(*d.to_label);
  j["actor"] = d.actor;
  j["timestamp"] = d.timestamp;
  if (d.note) j["note"] = *d.note;
  return j.dump();
}

CurationDecision DecisionFromJson(std::string_view line,
                                  std::string_view where) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error &) {
    throw DataError(std::string(where) + ": malformed JSON");
  }
  auto str = [&](const char *field, bool required) -> std::optional<std::string> {
    if (!j.is_object() || !j.contains(field) || j[field].is_null()) {
      if (required) {
        throw DataError(std::string(where) + ": missing field '" + field + "'");
      }
      return std::nullopt;
    }
    if (!j[field].is_string()) {
      throw DataError(std::string(where) + ": field '" + field +
                      "' must be a string");
    }
    return j[field].get<std::string>();
  };
  CurationDecision d;
  d.surface = *str("surface", true);
  std::string action = *str("action", true);
  auto parsed = ParseCurationAction(action);
  if (!parsed) {
    throw DataError(std::string(where) + ": unknown action '" + action + "'");
  }
  d.action = *parsed;
  if (auto to = str("to_label", false)) {
    d.to_label = ParseLabelOrThrow(*to, where);
  }
  if (d.action == CurationAction::kRelabel && !d.to_label) {
    throw DataError(std::string(where) + ": relabel requires to_label");
  }
  if (d.action != CurationAction::kRelabel) d.to_label.reset();
  d.actor = str("actor", false).value_or("");
  d.timestamp = *str("timestamp", true);
  d.note = str("note", false);
  return d;
}

std::vector<CurationDecision> ReadLedger(std::istream &in,
                                         std::string_view name) {
  std::vector<CurationDecision> ledger;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ledger.push_back(DecisionFromJson(
        line, std::string(name) + ": line " + std::to_string(line_no)));
  }
  return ledger;
}

std::vector<CurationDecision> ReadLedgerFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open ledger " + path.string());
  return ReadLedger(in, path.string());
}

std::map<std::string, CurationDecision> EffectiveDecisions(
    const std::vector<CurationDecision> &ledger) {
  std::map<std::string, CurationDecision> effective;
  for (const CurationDecision &d : ledger) {
    std::string surface = Normalize(d.surface);
    auto it = effective.find(surface);
    if (it == effective.end()) {
      effective.emplace(surface, d);
      continue;
    }
    const CurationDecision &prev = it->second;
    if (d.timestamp < prev.timestamp) continue;
    if (d.timestamp == prev.timestamp &&
        d.action == CurationAction::kRelabel &&
        prev.action == CurationAction::kRelabel && d.to_label != prev.to_label) {
      throw DataError("surface '" + surface + "' relabeled to both " +
                      std::string(LabelName(*prev.to_label)) + " and " +
                      std::string(LabelName(*d.to_label)) + " at " +
                      d.timestamp);
    }
    it->second = d;
  }
  return effective;
}

CurationResult ApplyCuration(const std::vector<TermEntry> &base_terms,
                             const std::vector<TermEntry> &candidates,
                             const std::vector<CurationDecision> &ledger) {
  CurationResult result;
  std::map<std::string, CurationDecision> decisions = EffectiveDecisions(ledger);

  std::map<std::string, std::vector<TermEntry>> base_by_surface;
  for (const TermEntry &e : base_terms) base_by_surface[e.surface].push_back(e);
  std::set<std::string> candidate_surfaces;
  for (const TermEntry &c : candidates) candidate_surfaces.insert(c.surface);

  for (const auto &[surface, d] : decisions) {
    if (!base_by_surface.count(surface) && !candidate_surfaces.count(surface)) {
      result.warnings.push_back("ledger decision for unknown surface '" +
                                surface + "'");
    }
  }

  auto decision_for = [&](const std::string &surface) -> const CurationDecision * {
    auto it = decisions.find(surface);
    return it == decisions.end() ? nullptr : &it->second;
  };

  std::vector<TermEntry> kept;
  std::map<std::string, Label> base_label;
  for (auto &[surface, entries] : base_by_surface) {
    const CurationDecision *d = decision_for(surface);
    if (d && d->action == CurationAction::kReject) continue;
    TermEntry e = entries.front();
    if (d && d->action == CurationAction::kRelabel) {
      e.label = *d->to_label;
    } else {
      std::set<Label> labels;
      for (const TermEntry &x : entries) labels.insert(x.label);
      if (labels.size() > 1) {
        std::string names;
        for (Label l : labels) {
          if (!names.empty()) names += ", ";
          names += LabelName(l);
        }
        throw DataError("surface '" + surface + "' is under labels " + names +
                        "; record a relabel or reject decision");
      }
    }
    base_label[surface] = e.label;
    kept.push_back(std::move(e));
  }

  for (const TermEntry &c : candidates) {
    const CurationDecision *d = decision_for(c.surface);
    if (!d || d->action == CurationAction::kReject) continue;
    auto parent = base_label.find(c.parent_term);
    if (parent == base_label.end()) {
      result.warnings.push_back("variant '" + c.surface +
                                "' dropped: parent term '" + c.parent_term +
                                "' not in vocabulary");
      continue;
    }
    TermEntry e = c;
    e.label = d->action == CurationAction::kRelabel ? *d->to_label
                                                    : parent->second;
    kept.push_back(std::move(e));
  }
  result.vocabulary = Vocabulary(std::move(kept));
  return result;
}

std::vector<LabelStatsRow> VocabularyStats(
    const Vocabulary &vocabulary, const AnnotatedCorpus &annotated,
    const std::map<Label, SubtreeStats> &shapes) {
  std::vector<LabelStatsRow> rows;
  std::array<uint64_t, kNumLabels> occurrences{};
  annotated.ForEachSentence([&](const AnnotatedSentence &s) {
    for (const BioTag &tag : s.tags) {
      if (tag.is_begin()) ++occurrences[static_cast<int>(tag.label())];
    }
  });
  LabelStatsRow total{"Total", 0, 0, 0, std::nullopt};
  for (Label label : kAllLabels) {
    LabelStatsRow row;
    row.label = std::string(LabelName(label));
    for (const TermEntry &e : vocabulary.entries()) {
      if (e.label != label) continue;
      ++row.vocabulary;
      if (e.origin == TermOrigin::kOntology) ++row.terms;
    }
    row.occurrences = occurrences[static_cast<int>(label)];
    auto it = shapes.find(label);
    if (it != shapes.end()) row.shape = it->second;
    total.terms += row.terms;
    total.vocabulary += row.vocabulary;
    total.occurrences += row.occurrences;
    rows.push_back(std::move(row));
  }
  rows.push_back(total);
  return rows;
}

void WriteStatsCsv(const std::vector<LabelStatsRow> &rows, std::ostream &out) {
  WriteCsvRow(out, {"label", "terms", "vocabulary", "occurrences", "depth",
                    "width"});
  for (const LabelStatsRow &r : rows) {
    WriteCsvRow(out, {r.label, std::to_string(r.terms),
                      std::to_string(r.vocabulary),
                      std::to_string(r.occurrences),
                      r.shape ? std::to_string(r.shape->depth) : "",
                      r.shape ? std::to_string(r.shape->width) : ""});
  }
}

void WriteStatsTable(const std::vector<LabelStatsRow> &rows, std::ostream &out) {
  auto line = [&] { out << std::string(68, '-') << '\n'; };
  line();
  out << std::left << std::setw(14) << "Label" << std::right << std::setw(10)
      << "Terms" << std::setw(12) << "Vocabulary" << std::setw(14)
      << "Occurrences" << std::setw(9) << "Depth" << std::setw(9) << "Width"
      << '\n';
  line();
  for (const LabelStatsRow &r : rows) {
    if (r.label == "Total") line();
    out << std::left << std::setw(14) << r.label << std::right << std::setw(10)
        << r.terms << std::setw(12) << r.vocabulary << std::setw(14)
        << r.occurrences << std::setw(9)
        << (r.shape ? std::to_string(r.shape->depth) : "") << std::setw(9)
        << (r.shape ? std::to_string(r.shape->width) : "") << '\n';
  }
  line();
  out << "Occurrences: disjoint counts after longest-match annotation.\n";
}

}  // namespace dsner
