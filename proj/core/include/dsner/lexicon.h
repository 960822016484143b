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


#ifndef DSNER_LEXICON_H_
#define DSNER_LEXICON_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dsner/corpus.h"
#include "dsner/labels.h"
#include "dsner/ontology.h"
#include "dsner/text.h"

namespace dsner {

enum class TermOrigin { kOntology, kVariant };

std::string_view TermOriginName(TermOrigin origin);
std::optional<TermOrigin> ParseTermOrigin(std::string_view name);

struct TermEntry {
  std::string surface;  // normalized
  Label label = Label::kNanoparticle;
  TermOrigin origin = TermOrigin::kOntology;
  std::string parent_term;  // set when origin == kVariant
  std::string concept_key;

  friend bool operator==(const TermEntry &, const TermEntry &) = default;
};

// Orders by (label, surface).
bool TermEntryLess(const TermEntry &a, const TermEntry &b);

// A label-disjoint term set.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Throws DataError if a surface repeats (under any label) or is empty.
  explicit Vocabulary(std::vector<TermEntry> entries);

  const std::vector<TermEntry> &entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const TermEntry *Find(std::string_view surface) const;
  bool Contains(std::string_view surface) const {
    return Find(surface) != nullptr;
  }

  // Sorted surfaces of one label.
  std::vector<std::string> Surfaces(Label label) const;

 private:
  std::vector<TermEntry> entries_;
  std::unordered_map<std::string, size_t> index_;
};

// Vocabulary file: CSV surface,label,origin,parent_term,concept_key.
void WriteTermCsv(const std::vector<TermEntry> &entries, std::ostream &out);
std::vector<TermEntry> ReadTermCsv(std::istream &in, std::string_view name);

// Every normalized preferred label and synonym of every subtree concept,
// one entry per (surface, label). A surface may appear under several labels
// here; curation has to settle those.
std::vector<TermEntry> BaseTerms(const std::vector<LabelSubtree> &subtrees);

// --- Variant engine -------------------------------------------------------
//
// Each rule maps a normalized term to normalized candidate strings. Rules are
// applied one at a time to the base term, never composed.

// V1: plural/singular of the head (last) word.
std::vector<std::string> InflectionVariants(const std::string &term);
// V2: closed/open compound alternates (join adjacent words, split a word).
std::vector<std::string> SpacingVariants(const std::string &term);
// V3: "ADJ N" <-> "N of NOUN(ADJ)" via a fixed suffix table.
std::vector<std::string> PermutationVariants(const std::string &term);
// V4: British/American spelling, per word.
std::vector<std::string> SpellingVariants(const std::string &term);

// Union of V1..V4, deduplicated, excluding the term itself.
std::vector<std::string> VariantCandidates(const std::string &term);

struct VariantResult {
  std::vector<TermEntry> candidates;  // sorted by (label, surface)
  std::map<std::string, uint64_t> frequency;  // surface -> corpus hits
};

// Candidates attested at least once in the corpus, excluding surfaces that
// are already base terms. A surface reachable from several base terms is
// attributed to the first in (label, surface) order.
VariantResult GenerateVariants(const std::vector<TermEntry> &base_terms,
                               const Corpus &corpus,
                               const NormalizeOptions &options = {});

// --- Curation ---------------------------------------------------------------

enum class CurationAction { kAccept, kReject, kRelabel };

std::string_view CurationActionName(CurationAction action);
std::optional<CurationAction> ParseCurationAction(std::string_view name);

struct CurationDecision {
  std::string surface;
  CurationAction action = CurationAction::kAccept;
  std::optional<Label> to_label;  // set iff action == kRelabel
  std::string actor;
  std::string timestamp;  // ISO-8601 UTC, compared lexicographically
  std::optional<std::string> note;

  friend bool operator==(const CurationDecision &,
                         const CurationDecision &) = default;
};

// One ledger line (compact JSON, no trailing newline).
std::string DecisionToJsonLine(const CurationDecision &decision);
CurationDecision DecisionFromJson(std::string_view line,
                                  std::string_view where);
std::vector<CurationDecision> ReadLedger(std::istream &in,
                                         std::string_view name);
std::vector<CurationDecision> ReadLedgerFile(const std::filesystem::path &path);

// Latest decision per normalized surface; equal timestamps resolve to the
// later ledger line, except two relabels to different labels, which throw
// DataError.
std::map<std::string, CurationDecision> EffectiveDecisions(
    const std::vector<CurationDecision> &ledger);

struct CurationResult {
  Vocabulary vocabulary;
  std::vector<std::string> warnings;
};

// Base terms are kept unless rejected; variants only when accepted (or
// relabeled) and while their parent term survives. A variant without its
// own relabel follows its parent's final label. Throws DataError when a
// surface is left under two labels.
CurationResult ApplyCuration(const std::vector<TermEntry> &base_terms,
                             const std::vector<TermEntry> &candidates,
                             const std::vector<CurationDecision> &ledger);

// --- Statistics -------------------------------------------------------------

struct LabelStatsRow {
  std::string label;  // label name or "Total"
  size_t terms = 0;
  size_t vocabulary = 0;
  uint64_t occurrences = 0;
  std::optional<SubtreeStats> shape;  // absent in the total row

  friend bool operator==(const LabelStatsRow &, const LabelStatsRow &) = default;
};

// One row per label plus a total row. Occurrences are the disjoint
// annotation counts of the annotated corpus.
std::vector<LabelStatsRow> VocabularyStats(
    const Vocabulary &vocabulary, const AnnotatedCorpus &annotated,
    const std::map<Label, SubtreeStats> &shapes);

void WriteStatsCsv(const std::vector<LabelStatsRow> &rows, std::ostream &out);
void WriteStatsTable(const std::vector<LabelStatsRow> &rows, std::ostream &out);

}  // namespace dsner

#endif  // DSNER_LEXICON_H_
