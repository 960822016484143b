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


#include "dsner/tagger.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "dsner/digest.h"
#include "dsner/error.h"
#include "dsner/rng.h"
#include "json.hpp"

namespace dsner {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::string_view kMagic = "dsner-perceptron";

std::string Prefix(const std::string &w, size_t n) {
  return w.size() <= n ? w : w.substr(0, n);
}

std::string Suffix(const std::string &w, size_t n) {
  return w.size() <= n ? w : w.substr(w.size() - n);
}

std::string FormatWeight(double w) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

std::string MetadataJson(const TrainMetadata &m) {
  nlohmann::json j;
  j["epochs"] = m.epochs;
  j["seed"] = m.seed;
  j["batch_size"] = m.batch_size;
  j["gazetteer_features"] = m.gazetteer_features;
  j["sentences"] = m.sentences;
  j["corpus_digest"] = m.corpus_digest;
  return j.dump();
}

std::vector<BioTag> GoldTags(const AnnotatedSentence &s) { return s.tags; }

}  // namespace

AnnotatedCorpus Reannotate(const SequenceTagger &tagger, const Corpus &corpus) {
  AnnotatedCorpus out;
  out.provenance = corpus.provenance;
  for (const Document &doc : corpus.documents) {
    AnnotatedDocument adoc{doc.id, {}};
    adoc.sentences.reserve(doc.sentences.size());
    for (const Sentence &s : doc.sentences) {
      adoc.sentences.push_back({s, tagger.Predict(s)});
    }
    out.documents.push_back(std::move(adoc));
  }
  return out;
}

std::string FeatureExtractor::WordShape(std::string_view token) {
  std::string shape;
  for (char c : token) {
    char k;
    if (c >= 'A' && c <= 'Z') {
      k = 'X';
    } else if (c >= 'a' && c <= 'z') {
      k = 'x';
    } else if (c >= '0' && c <= '9') {
      k = 'd';
    } else if (static_cast<unsigned char>(c) >= 0x80) {
      k = 'u';
    } else {
      k = c;
    }
    if (shape.empty() || shape.back() != k) shape.push_back(k);
  }
  return shape;
}

std::vector<std::string> FeatureExtractor::Emission(
    const std::vector<std::string> &tokens, size_t position,
    const std::vector<BioTag> *gazetteer) {
  auto word = [&](long i) -> std::string {
    if (i < 0) return i == -1 ? "<s>" : "<s2>";
    if (static_cast<size_t>(i) >= tokens.size()) {
      return static_cast<size_t>(i) == tokens.size() ? "</s>" : "</s2>";
    }
    return AsciiLower(tokens[static_cast<size_t>(i)]);
  };
  const long pos = static_cast<long>(position);
  const std::string w = word(pos);
  std::vector<std::string> f;
  f.reserve(16);
  f.push_back("bias");
  f.push_back("w=" + w);
  f.push_back("sh=" + WordShape(tokens[position]));
  for (size_t n = 1; n <= 3; ++n) {
    f.push_back("p" + std::to_string(n) + "=" + Prefix(w, n));
    f.push_back("s" + std::to_string(n) + "=" + Suffix(w, n));
  }
  f.push_back("w-2=" + word(pos - 2));
  f.push_back("w-1=" + word(pos - 1));
  f.push_back("w+1=" + word(pos + 1));
  f.push_back("w+2=" + word(pos + 2));
  if (gazetteer) f.push_back("gaz=" + (*gazetteer)[position].ToString());
  return f;
}

std::string FeatureExtractor::Transition(std::optional<BioTag> previous) {
  return previous ? "t=" + previous->ToString() : std::string("t=<s>");
}

std::vector<std::string> FeatureExtractor::Features(
    const std::vector<std::string> &tokens, size_t position,
    std::optional<BioTag> previous, const std::vector<BioTag> *gazetteer) {
  std::vector<std::string> f = Emission(tokens, position, gazetteer);
  f.push_back(Transition(previous));
  return f;
}

std::vector<BioTag> ConstrainedViterbi(const ScoreLattice &lattice) {
  const size_t n = lattice.emission.size();
  if (n == 0) return {};
  const auto &order = TagPriorityOrder();
  std::vector<std::array<double, BioTag::kCount>> best(n);
  std::vector<std::array<int, BioTag::kCount>> back(n);
  for (int tag = 0; tag < BioTag::kCount; ++tag) {
    best[0][tag] = BioTag::FromIndex(tag).CanFollow(std::nullopt)
                       ? lattice.transition[0][tag] + lattice.emission[0][tag]
                       : kNegInf;
    back[0][tag] = -1;
  }
  for (size_t i = 1; i < n; ++i) {
    for (int tag = 0; tag < BioTag::kCount; ++tag) {
      const BioTag current = BioTag::FromIndex(tag);
      double top = kNegInf;
      int arg = -1;
      for (int prev : order) {
        if (best[i - 1][prev] == kNegInf) continue;
        if (!current.CanFollow(BioTag::FromIndex(prev))) continue;
        double score = best[i - 1][prev] + lattice.transition[prev + 1][tag];
        if (arg < 0 || score > top) {
          top = score;
          arg = prev;
        }
      }
      best[i][tag] = arg < 0 ? kNegInf : top + lattice.emission[i][tag];
      back[i][tag] = arg;
    }
  }
  int tag = -1;
  double top = kNegInf;
  for (int t : order) {
    if (best[n - 1][t] == kNegInf) continue;
    if (tag < 0 || best[n - 1][t] > top) {
      top = best[n - 1][t];
      tag = t;
    }
  }
  std::vector<BioTag> out(n);
  for (size_t i = n; i-- > 0;) {
    out[i] = BioTag::FromIndex(tag);
    tag = back[i][tag];
  }
  return out;
}

int WeightTable::Intern(const std::string &feature) {
  auto [it, inserted] =
      index_.emplace(feature, static_cast<int>(names_.size()));
  if (inserted) {
    names_.push_back(feature);
    weights_.resize(weights_.size() + BioTag::kCount, 0.0);
  }
  return it->second;
}

int WeightTable::Find(const std::string &feature) const {
  auto it = index_.find(feature);
  return it == index_.end() ? -1 : it->second;
}

PerceptronTagger PerceptronTagger::Train(
    const AnnotatedCorpus &corpus, const TrainConfig &config,
    const Matcher *gazetteer,
    const std::function<void(const EpochStats &)> &on_epoch) {
  if (config.epochs < 1) throw UsageError("epochs must be >= 1");
  if (config.gazetteer_features && !gazetteer) {
    throw UsageError("gazetteer features need a vocabulary matcher");
  }
  std::vector<const AnnotatedSentence *> sentences;
  corpus.ForEachSentence([&](const AnnotatedSentence &s) {
    ValidateBio(s);
    sentences.push_back(&s);
  });
  if (sentences.empty()) throw DataError("cannot train on an empty corpus");

  PerceptronTagger model;
  model.metadata_.epochs = config.epochs;
  model.metadata_.seed = config.seed;
  model.metadata_.batch_size = config.batch_size;
  model.metadata_.gazetteer_features = config.gazetteer_features;
  model.metadata_.sentences = sentences.size();
  model.metadata_.corpus_digest = Sha256Hex(ConllString(corpus));
  model.gazetteer_ = config.gazetteer_features ? gazetteer : nullptr;

  // Fixed feature space: every emission feature of the training data plus
  // one transition feature per previous tag.
  WeightTable &w = model.weights_;
  std::array<int, BioTag::kCount + 1> transition_ids;
  transition_ids[0] = w.Intern(FeatureExtractor::Transition(std::nullopt));
  for (int t = 0; t < BioTag::kCount; ++t) {
    transition_ids[t + 1] =
        w.Intern(FeatureExtractor::Transition(BioTag::FromIndex(t)));
  }
  std::vector<std::vector<std::vector<int>>> emission_ids(sentences.size());
  for (size_t s = 0; s < sentences.size(); ++s) {
    const Sentence &sent = sentences[s]->sentence;
    std::vector<std::string> tokens = sent.TokenTexts();
    std::vector<BioTag> gaz;
    if (config.gazetteer_features) gaz = gazetteer->Annotate(sent).tags;
    emission_ids[s].resize(tokens.size());
    for (size_t i = 0; i < tokens.size(); ++i) {
      for (const std::string &f : FeatureExtractor::Emission(
               tokens, i, config.gazetteer_features ? &gaz : nullptr)) {
        emission_ids[s][i].push_back(w.Intern(f));
      }
    }
  }
  const size_t num_features = w.num_features();
  std::vector<double> accumulated(num_features * BioTag::kCount, 0.0);

  auto lattice_for = [&](size_t s) {
    ScoreLattice lattice;
    lattice.emission.resize(emission_ids[s].size());
    for (size_t i = 0; i < emission_ids[s].size(); ++i) {
      for (int tag = 0; tag < BioTag::kCount; ++tag) {
        double score = 0.0;
        for (int f : emission_ids[s][i]) score += w.at(f, tag);
        lattice.emission[i][tag] = score;
      }
    }
    for (int prev = 0; prev <= BioTag::kCount; ++prev) {
      for (int tag = 0; tag < BioTag::kCount; ++tag) {
        lattice.transition[prev][tag] = w.at(transition_ids[prev], tag);
      }
    }
    return lattice;
  };

  auto update = [&](size_t s, const std::vector<BioTag> &tags, double sign,
                    double step) {
    for (size_t i = 0; i < tags.size(); ++i) {
      int tag = tags[i].index();
      int prev = i == 0 ? 0 : tags[i - 1].index() + 1;
      auto bump = [&](int f) {
        w.at(f, tag) += sign;
        accumulated[static_cast<size_t>(f) * BioTag::kCount + tag] +=
            sign * step;
      };
      for (int f : emission_ids[s][i]) bump(f);
      bump(transition_ids[prev]);
    }
  };

  std::vector<size_t> order(sentences.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(config.seed);
  uint64_t examples = 0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.Shuffle(order);
    EpochStats stats;
    stats.epoch = epoch;
    for (size_t s : order) {
      ++examples;
      std::vector<BioTag> predicted = ConstrainedViterbi(lattice_for(s));
      const std::vector<BioTag> gold = GoldTags(*sentences[s]);
      stats.tokens += gold.size();
      for (size_t i = 0; i < gold.size(); ++i) {
        if (predicted[i] == gold[i]) ++stats.correct;
      }
      if (predicted != gold) {
        const double step = static_cast<double>(examples - 1);
        update(s, gold, +1.0, step);
        update(s, predicted, -1.0, step);
      }
    }
    if (on_epoch) on_epoch(stats);
  }

  // Average of the weights after every example:
  // (N * w_final - sum(delta * (t - 1))) / N.
  const double n = static_cast<double>(examples);
  for (size_t f = 0; f < num_features; ++f) {
    for (int tag = 0; tag < BioTag::kCount; ++tag) {
      double &weight = w.at(static_cast<int>(f), tag);
      weight = (n * weight - accumulated[f * BioTag::kCount + tag]) / n;
    }
  }
  return model;
}

std::vector<BioTag> PerceptronTagger::GazetteerTags(
    const Sentence &sentence) const {
  if (!gazetteer_) {
    throw DataError(
        "model was trained with gazetteer features; a vocabulary matcher is "
        "required for prediction");
  }
  return gazetteer_->Annotate(sentence).tags;
}

ScoreLattice PerceptronTagger::Lattice(const std::vector<std::string> &tokens,
                                       const std::vector<BioTag> *gazetteer) const {
  ScoreLattice lattice;
  lattice.emission.resize(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    auto &row = lattice.emission[i];
    row.fill(0.0);
    for (const std::string &f : FeatureExtractor::Emission(tokens, i, gazetteer)) {
      int id = weights_.Find(f);
      if (id < 0) continue;
      for (int tag = 0; tag < BioTag::kCount; ++tag) row[tag] += weights_.at(id, tag);
    }
  }
  for (int prev = -1; prev < BioTag::kCount; ++prev) {
    std::optional<BioTag> p;
    if (prev >= 0) p = BioTag::FromIndex(prev);
    int id = weights_.Find(FeatureExtractor::Transition(p));
    for (int tag = 0; tag < BioTag::kCount; ++tag) {
      lattice.transition[prev + 1][tag] = id < 0 ? 0.0 : weights_.at(id, tag);
    }
  }
  return lattice;
}

std::vector<BioTag> PerceptronTagger::Predict(const Sentence &sentence) const {
  if (sentence.tokens.empty()) return {};
  std::vector<BioTag> gaz;
  if (metadata_.gazetteer_features) gaz = GazetteerTags(sentence);
  return ConstrainedViterbi(Lattice(
      sentence.TokenTexts(), metadata_.gazetteer_features ? &gaz : nullptr));
}

double PerceptronTagger::Weight(const std::string &feature, BioTag tag) const {
  int id = weights_.Find(feature);
  return id < 0 ? 0.0 : weights_.at(id, tag.index());
}

void PerceptronTagger::Save(std::ostream &out) const {
  // Sorted (feature, tag) triples with non-zero weight.
  std::map<std::string, int> features;
  for (size_t f = 0; f < weights_.num_features(); ++f) {
    features.emplace(weights_.name(static_cast<int>(f)), static_cast<int>(f));
  }
  std::vector<std::pair<std::string, int>> tags_sorted;
  for (int t = 0; t < BioTag::kCount; ++t) {
    tags_sorted.emplace_back(BioTag::FromIndex(t).ToString(), t);
  }
  std::sort(tags_sorted.begin(), tags_sorted.end());

  std::ostringstream body;
  size_t feature_count = 0;
  size_t triples = 0;
  for (const auto &[name, id] : features) {
    bool any = false;
    for (const auto &[tag_name, tag] : tags_sorted) {
      double v = weights_.at(id, tag);
      if (v == 0.0) continue;
      body << name << '\t' << tag_name << '\t' << FormatWeight(v) << '\n';
      any = true;
      ++triples;
    }
    if (any) ++feature_count;
  }

  const std::string metadata = MetadataJson(metadata_);
  out << kMagic << '\n';
  out << "format_version\t" << kFormatVersion << '\n';
  out << "tags";
  for (int t = 0; t < BioTag::kCount; ++t) {
    out << '\t' << BioTag::FromIndex(t).ToString();
  }
  out << '\n';
  out << "feature_count\t" << feature_count << '\n';
  out << "weight_count\t" << triples << '\n';
  out << "metadata\t" << metadata << '\n';
  out << "metadata_digest\t" << Sha256Hex(metadata) << '\n';
  out << "weights\n";
  out << body.str();
}

std::string PerceptronTagger::SaveToString() const {
  std::ostringstream out;
  Save(out);
  return out.str();
}

PerceptronTagger PerceptronTagger::Load(std::istream &in) {
  auto fail = [](const std::string &why) -> DataError {
    return DataError("model file: " + why);
  };
  std::string line;
  if (!std::getline(in, line) || line != kMagic) {
    throw fail("not a dsner perceptron model");
  }
  std::map<std::string, std::string> header;
  while (std::getline(in, line) && line != "weights") {
    size_t tab = line.find('\t');
    if (tab == std::string::npos) throw fail("malformed header line '" + line + "'");
    header[line.substr(0, tab)] = line.substr(tab + 1);
  }
  if (header["format_version"] != std::to_string(kFormatVersion)) {
    throw fail("format_version '" + header["format_version"] +
               "' is not supported (expected " + std::to_string(kFormatVersion) +
               ")");
  }
  std::string expected_tags;
  for (int t = 0; t < BioTag::kCount; ++t) {
    if (t > 0) expected_tags += '\t';
    expected_tags += BioTag::FromIndex(t).ToString();
  }
  if (header["tags"] != expected_tags) throw fail("tag set mismatch");
  const std::string &metadata = header["metadata"];
  if (Sha256Hex(metadata) != header["metadata_digest"]) {
    throw fail("metadata digest mismatch");
  }
  PerceptronTagger model;
  try {
    nlohmann::json j = nlohmann::json::parse(metadata);
    model.metadata_.epochs = j.at("epochs").get<int>();
    model.metadata_.seed = j.at("seed").get<uint64_t>();
    model.metadata_.batch_size = j.at("batch_size").get<int>();
    model.metadata_.gazetteer_features = j.at("gazetteer_features").get<bool>();
    model.metadata_.sentences = j.at("sentences").get<size_t>();
    model.metadata_.corpus_digest = j.at("corpus_digest").get<std::string>();
  } catch (const nlohmann::json::exception &e) {
    throw fail(std::string("bad metadata: ") + e.what());
  }
  size_t triples = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    size_t a = line.find('\t');
    size_t b = a == std::string::npos ? a : line.find('\t', a + 1);
    if (b == std::string::npos) throw fail("malformed weight line");
    auto tag = BioTag::Parse(std::string_view(line).substr(a + 1, b - a - 1));
    if (!tag) throw fail("unknown tag in weight line");
    char *end = nullptr;
    std::string value = line.substr(b + 1);
    double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0') throw fail("bad weight value");
    int f = model.weights_.Intern(line.substr(0, a));
    model.weights_.at(f, tag->index()) = v;
    ++triples;
  }
  if (std::to_string(triples) != header["weight_count"]) {
    throw fail("weight count mismatch");
  }
  return model;
}

}  // namespace dsner
