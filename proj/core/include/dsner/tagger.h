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


#ifndef DSNER_TAGGER_H_
#define DSNER_TAGGER_H_

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dsner/annotate.h"
#include "dsner/corpus.h"
#include "dsner/labels.h"

namespace dsner {

// Model-agnostic sequence labeler. Any backend that can tag a tokenized
// sentence plugs into reannotation and evaluation.
class SequenceTagger {
 public:
  virtual ~SequenceTagger() = default;
  virtual std::vector<BioTag> Predict(const Sentence &sentence) const = 0;
};

// Re-tags every sentence of the corpus.
AnnotatedCorpus Reannotate(const SequenceTagger &tagger, const Corpus &corpus);

struct TrainConfig {
  int epochs = 1;
  uint64_t seed = 42;
  bool gazetteer_features = false;
  // Recorded only; the perceptron updates after every sentence.
  int batch_size = 32;
};

struct EpochStats {
  int epoch = 0;
  size_t tokens = 0;
  size_t correct = 0;  // online predictions before each update
  double accuracy() const {
    return tokens == 0 ? 0.0 : static_cast<double>(correct) / tokens;
  }
};

// Feature templates. Emission features depend on the sentence and the
// position only; the transition feature on the previous tag only.
class FeatureExtractor {
 public:
  // `gazetteer` (optional) holds the disjoint gazetteer tag per token.
  static std::vector<std::string> Emission(
      const std::vector<std::string> &tokens, size_t position,
      const std::vector<BioTag> *gazetteer = nullptr);
  static std::string Transition(std::optional<BioTag> previous);

  // Full key set for (sentence, position, previous tag).
  static std::vector<std::string> Features(
      const std::vector<std::string> &tokens, size_t position,
      std::optional<BioTag> previous,
      const std::vector<BioTag> *gazetteer = nullptr);

  static std::string WordShape(std::string_view token);
};

// Scores for one sentence: emission[pos][tag] and
// transition[prev + 1][tag] where prev = -1 denotes the sentence start.
struct ScoreLattice {
  std::vector<std::array<double, BioTag::kCount>> emission;
  std::array<std::array<double, BioTag::kCount>, BioTag::kCount + 1> transition;
};

// Highest-scoring tag sequence in which I-X only follows B-X or I-X. Ties
// prefer O, then tags in lexicographic order.
std::vector<BioTag> ConstrainedViterbi(const ScoreLattice &lattice);

// Dense feature x tag weight table.
class WeightTable {
 public:
  int Intern(const std::string &feature);
  int Find(const std::string &feature) const;  // -1 if unknown
  size_t num_features() const { return names_.size(); }
  const std::string &name(int feature) const { return names_[feature]; }

  double &at(int feature, int tag) {
    return weights_[static_cast<size_t>(feature) * BioTag::kCount + tag];
  }
  double at(int feature, int tag) const {
    return weights_[static_cast<size_t>(feature) * BioTag::kCount + tag];
  }

 private:
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> names_;
  std::vector<double> weights_;
};

struct TrainMetadata {
  int epochs = 0;
  uint64_t seed = 0;
  int batch_size = 0;
  bool gazetteer_features = false;
  size_t sentences = 0;
  std::string corpus_digest;  // SHA-256 of the training corpus in CoNLL form
};

// Averaged structured perceptron over FeatureExtractor features.
class PerceptronTagger : public SequenceTagger {
 public:
  static constexpr int kFormatVersion = 1;

  // Throws DataError on an empty or BIO-invalid corpus, or when gazetteer
  // features are requested without a matcher.
  static PerceptronTagger Train(
      const AnnotatedCorpus &corpus, const TrainConfig &config,
      const Matcher *gazetteer = nullptr,
      const std::function<void(const EpochStats &)> &on_epoch = nullptr);

  std::vector<BioTag> Predict(const Sentence &sentence) const override;

  // Required before Predict when the model was trained with gazetteer
  // features. The matcher must outlive the tagger.
  void set_gazetteer(const Matcher *gazetteer) { gazetteer_ = gazetteer; }

  const TrainMetadata &metadata() const { return metadata_; }
  const WeightTable &weights() const { return weights_; }
  // Averaged weight of (feature, tag); 0 for unknown features.
  double Weight(const std::string &feature, BioTag tag) const;

  // Text container: header lines (format_version, tags, feature count,
  // metadata and its digest) then sorted feature/tag/weight triples.
  void Save(std::ostream &out) const;
  std::string SaveToString() const;
  static PerceptronTagger Load(std::istream &in);

  // Lattice under the averaged weights; exposed for tests.
  ScoreLattice Lattice(const std::vector<std::string> &tokens,
                       const std::vector<BioTag> *gazetteer) const;

 private:
  std::vector<BioTag> GazetteerTags(const Sentence &sentence) const;

  WeightTable weights_;
  TrainMetadata metadata_;
  const Matcher *gazetteer_ = nullptr;
};

}  // namespace dsner

#endif  // DSNER_TAGGER_H_
