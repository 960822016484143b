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


#ifndef DSNER_ABLATION_H_
#define DSNER_ABLATION_H_

#include <cstdint>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dsner/annotate.h"
#include "dsner/corpus.h"
#include "dsner/lexicon.h"

namespace dsner {

enum class AblationMode {
  kRandomFold,
  kTop10,         // remove the most frequent 10% of each label
  kTop10KeepMft,  // same, but keep each label's most frequent term
  kMiddle10,      // remove 10% centred on the median frequency rank
  kTop10Only,     // remove everything except the most frequent 10%
};

std::string_view AblationModeName(AblationMode mode);
std::optional<AblationMode> ParseAblationMode(std::string_view name);

inline constexpr std::array<AblationMode, 4> kFrequencyModes = {
    AblationMode::kTop10, AblationMode::kTop10KeepMft, AblationMode::kMiddle10,
    AblationMode::kTop10Only};

struct AblationPlan {
  std::string plan_id;
  AblationMode mode = AblationMode::kRandomFold;
  int k = 0;              // random folds only
  double fraction = 0.0;  // nominal ablated share, random folds only
  uint64_t seed = 0;
  std::string prng;
  std::map<Label, std::vector<std::string>> ablated;  // sorted per label
  std::map<Label, std::vector<std::string>> kept;     // sorted per label

  bool IsAblated(const std::string &surface, Label label) const;
  size_t NumAblated() const;
};

// k in {5, 3}. Each label's surfaces are shuffled with Rng(seed) (labels in
// enum order, one generator) and cut into k contiguous chunks, earlier chunks
// one larger when the size does not divide. Plan i ablates chunk i of every
// label. Plans are named A-E for k = 5 and F-H for k = 3.
std::vector<AblationPlan> MakeRandomPlans(const Vocabulary &vocabulary, int k,
                                          uint64_t seed,
                                          std::vector<std::string> *warnings =
                                              nullptr);

// Surfaces of each label ranked by descending count, ties by surface.
// Throws DataError naming a vocabulary surface missing from `counts`.
AblationPlan MakeFrequencyPlan(const Vocabulary &vocabulary,
                               const TermCounts &counts, AblationMode mode,
                               uint64_t seed = 0);
std::vector<AblationPlan> MakeFrequencyPlans(const Vocabulary &vocabulary,
                                             const TermCounts &counts,
                                             uint64_t seed = 0);

// ceil(10% of n).
size_t TenPercent(size_t n);

enum class MixedPolicy { kToTest, kDrop };

struct FoldSplit {
  std::string plan_id;
  std::vector<SentenceId> train;
  std::vector<SentenceId> test;
  std::vector<SentenceId> dropped;  // only with MixedPolicy::kDrop
  size_t corpus_sentences = 0;
  size_t mixed = 0;  // test sentences holding both ablated and kept terms

  double TrainFraction() const;
};

// Sentences whose annotations hold no ablated surface go to train, the rest
// to test (mixed sentences too, unless dropped). Corpus order is kept.
FoldSplit SplitCorpus(const AnnotatedCorpus &corpus, const AblationPlan &plan,
                      MixedPolicy policy = MixedPolicy::kToTest,
                      const NormalizeOptions &options = {});

// Ablated surfaces found by re-annotating the raw text of `ids` with the
// full matcher. Empty for a clean training set.
std::vector<std::string> ContaminationScan(const AnnotatedCorpus &corpus,
                                           const std::vector<SentenceId> &ids,
                                           const Matcher &full_matcher,
                                           const AblationPlan &plan);

// Sentences of `corpus` listed in `ids`, in corpus order, documents kept.
AnnotatedCorpus SubsetCorpus(const AnnotatedCorpus &corpus,
                             const std::vector<SentenceId> &ids);

// Plan manifest: {"plan_id", "mode", "seed", "ablated": {label: [...]},
// "prng"} plus k/fraction for random folds. Pretty-printed, newline
// terminated.
std::string PlanToJson(const AblationPlan &plan);
// `kept` is recomputed from the vocabulary; throws DataError on a surface
// the vocabulary does not hold under the stated label.
AblationPlan PlanFromJson(std::string_view text, const Vocabulary &vocabulary);

// Split manifest: {"plan_id", "train": [...], "test": [...]} plus counts.
std::string SplitToJson(const FoldSplit &split);
FoldSplit SplitFromJson(std::string_view text);

}  // namespace dsner

#endif  // DSNER_ABLATION_H_
