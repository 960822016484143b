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


#include "dsner/eval.h"

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <tuple>

#include "dsner/error.h"
#include "dsner/spans.h"
#include "dsner/table.h"
#include "json.hpp"

namespace dsner {

using ordered_json = nlohmann::ordered_json;

namespace {

double Ratio(uint64_t num, uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

using SpanKey = std::tuple<size_t, size_t, Label>;

std::set<SpanKey> SpanKeys(const AnnotatedSentence &s) {
  std::set<SpanKey> keys;
  for (const EntitySpan &span : ExtractSpans(s)) {
    keys.emplace(span.start, span.end, span.label);
  }
  return keys;
}

ordered_json CountsJson(const SpanCounts &c) {
  ordered_json j;
  j["correct"] = c.correct;
  j["gold_total"] = c.gold_total;
  j["pred_total"] = c.pred_total;
  j["precision"] = c.Precision();
  j["recall"] = c.Recall();
  j["f1"] = c.F1();
  return j;
}

ordered_json OptionalNumber(std::optional<double> v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

double SpanCounts::Precision() const { return Ratio(correct, pred_total); }
double SpanCounts::Recall() const { return Ratio(correct, gold_total); }

double SpanCounts::F1() const {
  const double p = Precision();
  const double r = Recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

SpanCounts &SpanCounts::operator+=(const SpanCounts &other) {
  correct += other.correct;
  gold_total += other.gold_total;
  pred_total += other.pred_total;
  return *this;
}

EvalReport Score(const AnnotatedCorpus &gold, const AnnotatedCorpus &pred) {
  std::map<SentenceId, const AnnotatedSentence *> predicted;
  pred.ForEachSentence([&](const AnnotatedSentence &s) {
    if (!predicted.emplace(s.sentence.id, &s).second) {
      throw DataError("prediction repeats sentence " + s.sentence.id.ToString());
    }
  });
  EvalReport report;
  gold.ForEachSentence([&](const AnnotatedSentence &g) {
    auto it = predicted.find(g.sentence.id);
    if (it == predicted.end()) {
      throw DataError("sentence sets differ: " + g.sentence.id.ToString() +
                      " has no prediction");
    }
    const AnnotatedSentence &p = *it->second;
    if (p.sentence.tokens.size() != g.sentence.tokens.size()) {
      throw DataError("token count differs for sentence " +
                      g.sentence.id.ToString());
    }
    std::set<SpanKey> gold_spans = SpanKeys(g);
    std::set<SpanKey> pred_spans = SpanKeys(p);
    for (const SpanKey &k : gold_spans) {
      SpanCounts &c = report.per_label[static_cast<size_t>(std::get<2>(k))];
      ++c.gold_total;
      if (pred_spans.count(k)) ++c.correct;
    }
    for (const SpanKey &k : pred_spans) {
      ++report.per_label[static_cast<size_t>(std::get<2>(k))].pred_total;
    }
    predicted.erase(it);
    ++report.sentences;
  });
  if (!predicted.empty()) {
    throw DataError("sentence sets differ: " +
                    predicted.begin()->first.ToString() + " has no gold tags");
  }
  report.micro = SumPerLabel(report);
  return report;
}

SpanCounts SumPerLabel(const EvalReport &report) {
  SpanCounts sum;
  for (const SpanCounts &c : report.per_label) sum += c;
  return sum;
}

std::vector<Judgment> ReadJudgments(std::istream &in, std::string_view name) {
  std::vector<Judgment> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = std::string(name) + ":" + std::to_string(line_no);
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      Judgment jd;
      jd.surface = Normalize(j.at("surface").get<std::string>());
      jd.label = ParseLabelOrThrow(j.at("label").get<std::string>(), where);
      const auto &v = j.at("verdict");
      if (v.is_boolean()) {
        jd.correct = v.get<bool>();
      } else {
        const std::string s = v.get<std::string>();
        if (s == "correct") {
          jd.correct = true;
        } else if (s == "incorrect") {
          jd.correct = false;
        } else {
          throw DataError(where + ": verdict must be correct or incorrect");
        }
      }
      out.push_back(std::move(jd));
    } catch (const nlohmann::json::exception &e) {
      throw DataError(where + ": " + e.what());
    }
  }
  return out;
}

std::optional<double> DiscoveryReport::Precision() const {
  if (judged == 0) return std::nullopt;
  return Ratio(judged_correct, judged);
}

DiscoveryReport Discover(const AnnotatedCorpus &pred,
                         const Vocabulary &vocabulary, std::string tag,
                         const std::vector<Judgment> *judgments,
                         const NormalizeOptions &options) {
  std::map<std::string, std::array<uint64_t, kNumLabels>> seen;
  pred.ForEachSentence([&](const AnnotatedSentence &s) {
    for (const EntitySpan &span : ExtractSpans(s, options)) {
      if (span.surface.empty() || vocabulary.Contains(span.surface)) continue;
      auto [it, inserted] = seen.try_emplace(span.surface);
      if (inserted) it->second.fill(0);
      ++it->second[static_cast<size_t>(span.label)];
    }
  });
  std::map<std::pair<std::string, Label>, bool> verdicts;
  if (judgments) {
    for (const Judgment &j : *judgments) verdicts[{j.surface, j.label}] = j.correct;
  }
  DiscoveryReport report;
  report.tag = std::move(tag);
  for (const auto &[surface, counts] : seen) {
    DiscoveredEntity e;
    e.surface = surface;
    size_t best = 0;
    for (size_t l = 0; l < counts.size(); ++l) {
      e.occurrences += counts[l];
      if (counts[l] > counts[best]) best = l;
    }
    e.label = static_cast<Label>(best);
    auto v = verdicts.find({surface, e.label});
    if (v != verdicts.end()) {
      e.correct = v->second;
      ++report.judged;
      if (v->second) ++report.judged_correct;
    }
    report.entities.push_back(std::move(e));
  }
  return report;
}

std::optional<double> RefoundReport::Recall() const {
  if (ablated.empty()) return std::nullopt;
  return Ratio(retrieved.size(), ablated.size());
}

RefoundReport Refound(const AnnotatedCorpus &pred, const AblationPlan &plan,
                      bool any_label, const NormalizeOptions &options) {
  std::set<std::pair<std::string, Label>> predicted;
  std::set<std::string> predicted_any;
  pred.ForEachSentence([&](const AnnotatedSentence &s) {
    for (const EntitySpan &span : ExtractSpans(s, options)) {
      predicted.emplace(span.surface, span.label);
      predicted_any.insert(span.surface);
    }
  });
  RefoundReport report;
  report.plan_id = plan.plan_id;
  report.any_label = any_label;
  for (const auto &[label, surfaces] : plan.ablated) {
    for (const std::string &surface : surfaces) {
      report.ablated.emplace_back(surface, label);
      bool hit = any_label ? predicted_any.count(surface) > 0
                           : predicted.count({surface, label}) > 0;
      if (hit) report.retrieved.emplace_back(surface, label);
    }
  }
  return report;
}

std::string EvalReportJson(const EvalReport &report, std::string_view run) {
  ordered_json j;
  j["run"] = std::string(run);
  j["sentences"] = report.sentences;
  j["micro"] = CountsJson(report.micro);
  ordered_json labels = ordered_json::object();
  for (Label l : kAllLabels) {
    labels[std::string(LabelName(l))] = CountsJson(report.of(l));
  }
  j["per_label"] = std::move(labels);
  return j.dump();
}

std::string DiscoveryReportJson(const DiscoveryReport &report) {
  ordered_json j;
  j["tag"] = report.tag;
  j["new_entities"] = report.count();
  j["judged"] = report.judged;
  j["judged_correct"] = report.judged_correct;
  j["precision"] = OptionalNumber(report.Precision());
  ordered_json entities = ordered_json::array();
  for (const DiscoveredEntity &e : report.entities) {
    ordered_json item;
    item["surface"] = e.surface;
    item["label"] = std::string(LabelName(e.label));
    item["occurrences"] = e.occurrences;
    item["correct"] = e.correct ? ordered_json(*e.correct) : ordered_json(nullptr);
    entities.push_back(std::move(item));
  }
  j["entities"] = std::move(entities);
  return j.dump();
}

std::string RefoundReportJson(const RefoundReport &report) {
  auto list = [](const std::vector<std::pair<std::string, Label>> &terms) {
    ordered_json a = ordered_json::array();
    for (const auto &[surface, label] : terms) {
      a.push_back({{"surface", surface}, {"label", std::string(LabelName(label))}});
    }
    return a;
  };
  ordered_json j;
  j["plan_id"] = report.plan_id;
  j["any_label"] = report.any_label;
  j["retrieved_count"] = report.retrieved.size();
  j["ablated_count"] = report.ablated.size();
  j["recall"] = OptionalNumber(report.Recall());
  j["retrieved"] = list(report.retrieved);
  j["ablated"] = list(report.ablated);
  return j.dump();
}

void WriteEvalTable(const EvalReport &report, std::ostream &out) {
  TextTable table({"Label", "Positive", "Total", "Recall", "Positive", "Total",
                   "Precision", "F1 Score"},
                  "lrrrrrrr");
  auto row = [&](std::string name, const SpanCounts &c) {
    table.AddRow({std::move(name), std::to_string(c.correct),
                  std::to_string(c.gold_total), FormatRatio(c.Recall()),
                  std::to_string(c.correct), std::to_string(c.pred_total),
                  FormatRatio(c.Precision()), FormatRatio(c.F1())});
  };
  for (Label l : kAllLabels) row(std::string(LabelName(l)), report.of(l));
  table.AddRule();
  row("Micro", report.micro);
  table.Write(out);
}

std::string FormatRatio(std::optional<double> value, int digits) {
  if (!value) return "N/A";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, *value);
  return buf;
}

}  // namespace dsner
