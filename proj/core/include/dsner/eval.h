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


#ifndef DSNER_EVAL_H_
#define DSNER_EVAL_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dsner/ablation.h"
#include "dsner/corpus.h"
#include "dsner/labels.h"
#include "dsner/lexicon.h"
#include "dsner/text.h"

namespace dsner {

// Strict span counts. `gold_total` is the recall denominator,
// `pred_total` the precision denominator.
struct SpanCounts {
  uint64_t correct = 0;
  uint64_t gold_total = 0;
  uint64_t pred_total = 0;

  double Precision() const;
  double Recall() const;
  double F1() const;  // 0 when P + R is 0

  SpanCounts &operator+=(const SpanCounts &other);
  friend bool operator==(const SpanCounts &, const SpanCounts &) = default;
};

struct EvalReport {
  std::array<SpanCounts, kNumLabels> per_label;  // indexed by Label
  SpanCounts micro;
  size_t sentences = 0;

  const SpanCounts &of(Label label) const {
    return per_label[static_cast<size_t>(label)];
  }
};

// Span, label-strict scoring. Both corpora must hold the same sentence ids;
// otherwise DataError. Sentence order does not matter.
EvalReport Score(const AnnotatedCorpus &gold, const AnnotatedCorpus &pred);

// Sums the per-label rows; equals `micro` for every report Score returns.
SpanCounts SumPerLabel(const EvalReport &report);

struct Judgment {
  std::string surface;
  Label label;
  bool correct = false;
};

// jsonl {"surface", "label", "verdict"} with verdict "correct"/"incorrect"
// or a boolean.
std::vector<Judgment> ReadJudgments(std::istream &in, std::string_view name);

struct DiscoveredEntity {
  std::string surface;  // normalized
  Label label;          // most frequent predicted label, ties by enum order
  uint64_t occurrences = 0;
  std::optional<bool> correct;  // set when a judgment for (surface, label) exists

  friend bool operator==(const DiscoveredEntity &,
                         const DiscoveredEntity &) = default;
};

struct DiscoveryReport {
  std::string tag;                         // free-form run tag, e.g. "epochs=5"
  std::vector<DiscoveredEntity> entities;  // sorted by surface
  size_t judged = 0;
  size_t judged_correct = 0;

  size_t count() const { return entities.size(); }
  // correct / judged; absent without judgments.
  std::optional<double> Precision() const;
};

// Predicted surfaces not in the vocabulary under any label.
DiscoveryReport Discover(const AnnotatedCorpus &pred,
                         const Vocabulary &vocabulary, std::string tag,
                         const std::vector<Judgment> *judgments = nullptr,
                         const NormalizeOptions &options = {});

struct RefoundReport {
  std::string plan_id;
  bool any_label = false;
  std::vector<std::pair<std::string, Label>> ablated;    // plan order
  std::vector<std::pair<std::string, Label>> retrieved;  // subset, plan order

  // |retrieved| / |ablated|; absent when nothing was ablated.
  std::optional<double> Recall() const;
};

// An ablated surface is retrieved when some predicted span has its surface
// and, unless `any_label`, its label.
RefoundReport Refound(const AnnotatedCorpus &pred, const AblationPlan &plan,
                      bool any_label = false,
                      const NormalizeOptions &options = {});

// Single-object JSON lines (no trailing newline).
std::string EvalReportJson(const EvalReport &report, std::string_view run);
std::string DiscoveryReportJson(const DiscoveryReport &report);
std::string RefoundReportJson(const RefoundReport &report);

// Per-label rows plus a micro row.
void WriteEvalTable(const EvalReport &report, std::ostream &out);

// Fixed-point with three decimals; "N/A" for absent values.
std::string FormatRatio(std::optional<double> value, int digits = 3);

}  // namespace dsner

#endif  // DSNER_EVAL_H_
