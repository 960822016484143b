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


#include "dsner/ablation.h"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "dsner/error.h"
#include "dsner/rng.h"
#include "dsner/spans.h"
#include "json.hpp"

namespace dsner {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kPlanFormatVersion = 1;

void FillKept(AblationPlan &plan, const Vocabulary &vocabulary) {
  plan.kept.clear();
  for (Label label : kAllLabels) {
    auto &ablated = plan.ablated[label];
    std::sort(ablated.begin(), ablated.end());
    std::vector<std::string> kept;
    for (const std::string &s : vocabulary.Surfaces(label)) {
      if (!std::binary_search(ablated.begin(), ablated.end(), s)) {
        kept.push_back(s);
      }
    }
    plan.kept[label] = std::move(kept);
  }
}

std::string SentenceKey(const SentenceId &id) { return id.ToString(); }

}  // namespace

std::string_view AblationModeName(AblationMode mode) {
  switch (mode) {
    case AblationMode::kRandomFold:
      return "random_fold";
    case AblationMode::kTop10:
      return "top10";
    case AblationMode::kTop10KeepMft:
      return "top10_keep_mft";
    case AblationMode::kMiddle10:
      return "middle10";
    case AblationMode::kTop10Only:
      return "top10_only";
  }
  return "random_fold";
}

std::optional<AblationMode> ParseAblationMode(std::string_view name) {
  for (AblationMode m :
       {AblationMode::kRandomFold, AblationMode::kTop10,
        AblationMode::kTop10KeepMft, AblationMode::kMiddle10,
        AblationMode::kTop10Only}) {
    if (AblationModeName(m) == name) return m;
  }
  return std::nullopt;
}

bool AblationPlan::IsAblated(const std::string &surface, Label label) const {
  auto it = ablated.find(label);
  return it != ablated.end() &&
         std::binary_search(it->second.begin(), it->second.end(), surface);
}

size_t AblationPlan::NumAblated() const {
  size_t n = 0;
  for (const auto &[label, surfaces] : ablated) n += surfaces.size();
  return n;
}

std::vector<AblationPlan> MakeRandomPlans(const Vocabulary &vocabulary, int k,
                                          uint64_t seed,
                                          std::vector<std::string> *warnings) {
  if (k != 5 && k != 3) {
    throw UsageError("random fold count must be 5 or 3, got " +
                     std::to_string(k));
  }
  static constexpr const char *kNames5[] = {"A", "B", "C", "D", "E"};
  static constexpr const char *kNames3[] = {"F", "G", "H"};
  std::vector<AblationPlan> plans(k);
  for (int i = 0; i < k; ++i) {
    plans[i].plan_id = k == 5 ? kNames5[i] : kNames3[i];
    plans[i].mode = AblationMode::kRandomFold;
    plans[i].k = k;
    plans[i].fraction = k == 5 ? 0.20 : 0.33;
    plans[i].seed = seed;
    plans[i].prng = std::string(Rng::kAlgorithm);
  }
  Rng rng(seed);
  for (Label label : kAllLabels) {
    std::vector<std::string> surfaces = vocabulary.Surfaces(label);
    if (surfaces.size() < static_cast<size_t>(k) && warnings) {
      warnings->push_back("label " + std::string(LabelName(label)) + " has " +
                          std::to_string(surfaces.size()) +
                          " surfaces, fewer than " + std::to_string(k) +
                          " folds");
    }
    rng.Shuffle(surfaces);
    size_t base = surfaces.size() / k;
    size_t extra = surfaces.size() % k;
    size_t pos = 0;
    for (int i = 0; i < k; ++i) {
      size_t size = base + (static_cast<size_t>(i) < extra ? 1 : 0);
      plans[i].ablated[label].assign(surfaces.begin() + pos,
                                     surfaces.begin() + pos + size);
      pos += size;
    }
  }
  for (AblationPlan &plan : plans) FillKept(plan, vocabulary);
  return plans;
}

size_t TenPercent(size_t n) { return (n + 9) / 10; }

AblationPlan MakeFrequencyPlan(const Vocabulary &vocabulary,
                               const TermCounts &counts, AblationMode mode,
                               uint64_t seed) {
  if (mode == AblationMode::kRandomFold) {
    throw UsageError("MakeFrequencyPlan needs a frequency mode");
  }
  AblationPlan plan;
  plan.plan_id = std::string(AblationModeName(mode));
  plan.mode = mode;
  plan.seed = seed;
  plan.prng = std::string(Rng::kAlgorithm);
  for (Label label : kAllLabels) {
    std::vector<std::pair<uint64_t, std::string>> ranked;
    for (const std::string &s : vocabulary.Surfaces(label)) {
      auto it = counts.find({s, label});
      if (it == counts.end()) {
        throw DataError("no occurrence count for surface '" + s + "' (" +
                        std::string(LabelName(label)) + ")");
      }
      ranked.emplace_back(it->second, s);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    size_t n = ranked.size();
    size_t m = TenPercent(n);
    size_t begin = 0, end = 0;
    switch (mode) {
      case AblationMode::kTop10:
        begin = 0, end = m;
        break;
      case AblationMode::kTop10KeepMft:
        begin = std::min<size_t>(1, m), end = m;
        break;
      case AblationMode::kMiddle10:
        begin = (n - m) / 2, end = begin + m;
        break;
      case AblationMode::kTop10Only:
        begin = m, end = n;
        break;
      case AblationMode::kRandomFold:
        break;
    }
    auto &ablated = plan.ablated[label];
    for (size_t r = begin; r < end; ++r) ablated.push_back(ranked[r].second);
  }
  FillKept(plan, vocabulary);
  return plan;
}

std::vector<AblationPlan> MakeFrequencyPlans(const Vocabulary &vocabulary,
                                             const TermCounts &counts,
                                             uint64_t seed) {
  std::vector<AblationPlan> plans;
  for (AblationMode mode : kFrequencyModes) {
    plans.push_back(MakeFrequencyPlan(vocabulary, counts, mode, seed));
  }
  return plans;
}

double FoldSplit::TrainFraction() const {
  return corpus_sentences == 0
             ? 0.0
             : static_cast<double>(train.size()) /
                   static_cast<double>(corpus_sentences);
}

FoldSplit SplitCorpus(const AnnotatedCorpus &corpus, const AblationPlan &plan,
                      MixedPolicy policy, const NormalizeOptions &options) {
  FoldSplit split;
  split.plan_id = plan.plan_id;
  corpus.ForEachSentence([&](const AnnotatedSentence &s) {
    ++split.corpus_sentences;
    bool has_ablated = false;
    bool has_kept = false;
    for (const EntitySpan &span : ExtractSpans(s, options)) {
      if (plan.IsAblated(span.surface, span.label)) {
        has_ablated = true;
      } else {
        has_kept = true;
      }
    }
    if (!has_ablated) {
      split.train.push_back(s.sentence.id);
    } else if (has_kept) {
      ++split.mixed;
      if (policy == MixedPolicy::kDrop) {
        split.dropped.push_back(s.sentence.id);
      } else {
        split.test.push_back(s.sentence.id);
      }
    } else {
      split.test.push_back(s.sentence.id);
    }
  });
  return split;
}

std::vector<std::string> ContaminationScan(const AnnotatedCorpus &corpus,
                                           const std::vector<SentenceId> &ids,
                                           const Matcher &full_matcher,
                                           const AblationPlan &plan) {
  std::unordered_set<std::string> wanted;
  for (const SentenceId &id : ids) wanted.insert(SentenceKey(id));
  std::set<std::string> found;
  corpus.ForEachSentence([&](const AnnotatedSentence &s) {
    if (!wanted.count(SentenceKey(s.sentence.id))) return;
    for (const Match &m : full_matcher.FindDisjoint(s.sentence.tokens)) {
      const auto &p = full_matcher.pattern(m.pattern);
      if (plan.IsAblated(p.surface, p.label)) found.insert(p.surface);
    }
  });
  return {found.begin(), found.end()};
}

AnnotatedCorpus SubsetCorpus(const AnnotatedCorpus &corpus,
                             const std::vector<SentenceId> &ids) {
  std::unordered_set<std::string> wanted;
  for (const SentenceId &id : ids) wanted.insert(SentenceKey(id));
  AnnotatedCorpus out;
  out.provenance = corpus.provenance;
  for (const AnnotatedDocument &doc : corpus.documents) {
    AnnotatedDocument d{doc.id, {}};
    for (const AnnotatedSentence &s : doc.sentences) {
      if (wanted.count(SentenceKey(s.sentence.id))) d.sentences.push_back(s);
    }
    if (!d.sentences.empty()) out.documents.push_back(std::move(d));
  }
  return out;
}

std::string PlanToJson(const AblationPlan &plan) {
  Json j;
  j["format_version"] = kPlanFormatVersion;
  j["plan_id"] = plan.plan_id;
  j["mode"] = AblationModeName(plan.mode);
  if (plan.mode == AblationMode::kRandomFold) {
    j["k"] = plan.k;
    j["fraction"] = plan.fraction;
  }
  j["seed"] = plan.seed;
  j["prng"] = plan.prng;
  Json ablated = Json::object();
  for (Label label : kAllLabels) {
    auto it = plan.ablated.find(label);
    ablated[std::string(LabelName(label))] =
        it == plan.ablated.end() ? std::vector<std::string>{} : it->second;
  }
  j["ablated"] = std::move(ablated);
  return j.dump(2) + "\n";
}

AblationPlan PlanFromJson(std::string_view text, const Vocabulary &vocabulary) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error &) {
    throw DataError("plan manifest: malformed JSON");
  }
  try {
    if (j.at("format_version").get<int>() != kPlanFormatVersion) {
      throw DataError("plan manifest: unsupported format_version");
    }
    AblationPlan plan;
    plan.plan_id = j.at("plan_id").get<std::string>();
    auto mode = ParseAblationMode(j.at("mode").get<std::string>());
    if (!mode) throw DataError("plan " + plan.plan_id + ": unknown mode");
    plan.mode = *mode;
    if (plan.mode == AblationMode::kRandomFold) {
      plan.k = j.at("k").get<int>();
      plan.fraction = j.at("fraction").get<double>();
    }
    plan.seed = j.at("seed").get<uint64_t>();
    plan.prng = j.at("prng").get<std::string>();
    for (const auto &[name, surfaces] : j.at("ablated").items()) {
      Label label = ParseLabelOrThrow(name, "plan " + plan.plan_id);
      for (const auto &s : surfaces) {
        std::string surface = s.get<std::string>();
        const TermEntry *e = vocabulary.Find(surface);
        if (!e || e->label != label) {
          throw DataError("plan " + plan.plan_id + ": surface '" + surface +
                          "' is not a " + name + " term of the vocabulary");
        }
        plan.ablated[label].push_back(surface);
      }
    }
    FillKept(plan, vocabulary);
    return plan;
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("plan manifest: ") + e.what());
  }
}

std::string SplitToJson(const FoldSplit &split) {
  auto ids = [](const std::vector<SentenceId> &v) {
    Json a = Json::array();
    for (const SentenceId &id : v) a.push_back(id.ToString());
    return a;
  };
  Json j;
  j["format_version"] = kPlanFormatVersion;
  j["plan_id"] = split.plan_id;
  j["corpus_sentences"] = split.corpus_sentences;
  j["train_count"] = split.train.size();
  j["test_count"] = split.test.size();
  j["dropped_count"] = split.dropped.size();
  j["mixed_count"] = split.mixed;
  j["partition_complete"] =
      split.train.size() + split.test.size() == split.corpus_sentences;
  j["train"] = ids(split.train);
  j["test"] = ids(split.test);
  if (!split.dropped.empty()) j["dropped"] = ids(split.dropped);
  return j.dump(2) + "\n";
}

FoldSplit SplitFromJson(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error &) {
    throw DataError("split manifest: malformed JSON");
  }
  try {
    if (j.at("format_version").get<int>() != kPlanFormatVersion) {
      throw DataError("split manifest: unsupported format_version");
    }
    FoldSplit split;
    split.plan_id = j.at("plan_id").get<std::string>();
    split.corpus_sentences = j.at("corpus_sentences").get<size_t>();
    split.mixed = j.at("mixed_count").get<size_t>();
    for (const auto &id : j.at("train")) {
      split.train.push_back(SentenceId::Parse(id.get<std::string>()));
    }
    for (const auto &id : j.at("test")) {
      split.test.push_back(SentenceId::Parse(id.get<std::string>()));
    }
    if (j.contains("dropped")) {
      for (const auto &id : j["dropped"]) {
        split.dropped.push_back(SentenceId::Parse(id.get<std::string>()));
      }
    }
    return split;
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("split manifest: ") + e.what());
  }
}

}  // namespace dsner
