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


#ifndef DSNER_PIPELINE_H_
#define DSNER_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dsner/ablation.h"
#include "dsner/annotate.h"
#include "dsner/corpus.h"
#include "dsner/eval.h"
#include "dsner/lexicon.h"
#include "dsner/ontology.h"
#include "dsner/tagger.h"

namespace dsner {

std::string_view ToolVersion();

struct ArtifactRef {
  std::string name;  // logical role, e.g. "corpus"
  std::string path;  // workdir-relative for outputs, as given for inputs
  std::string sha256;

  friend bool operator==(const ArtifactRef &, const ArtifactRef &) = default;
};

// Provenance record written next to every step's outputs. No timestamps, so
// reruns with equal inputs produce equal bytes.
struct Manifest {
  static constexpr int kFormatVersion = 1;

  int format_version = kFormatVersion;
  std::string step;
  std::string tool_version;
  std::optional<uint64_t> seed;
  std::map<std::string, std::string> options;
  std::vector<ArtifactRef> inputs;
  std::vector<ArtifactRef> outputs;

  // Pretty-printed JSON with a trailing newline.
  std::string ToJson() const;
  // Throws DataError on malformed input or a different format_version.
  static Manifest FromJson(std::string_view text, std::string_view where);

  friend bool operator==(const Manifest &, const Manifest &) = default;
};

// Workdir layout. All paths are relative to the root.
namespace artifacts {
inline constexpr const char *kCorpus = "corpus/corpus.jsonl";
inline constexpr const char *kNpoReduced = "ontology/npo.reduced.csv";
inline constexpr const char *kEnmReduced = "ontology/enm.reduced.csv";
inline constexpr const char *kNpoOccurrences = "ontology/npo.occurrences.csv";
inline constexpr const char *kEnmOccurrences = "ontology/enm.occurrences.csv";
inline constexpr const char *kSubtrees = "ontology/subtrees.json";
inline constexpr const char *kBaseTerms = "lexicon/base_terms.csv";
inline constexpr const char *kCandidates = "lexicon/candidates.csv";
inline constexpr const char *kCandidateFrequency = "lexicon/candidate_frequency.csv";
inline constexpr const char *kLedger = "lexicon/ledger.jsonl";
inline constexpr const char *kVocabulary = "lexicon/vocabulary.csv";
inline constexpr const char *kCurationWarnings = "lexicon/curation_warnings.txt";
inline constexpr const char *kAnnotated = "annotate/annotated.conll";
inline constexpr const char *kTermCounts = "annotate/term_counts.csv";
inline constexpr const char *kStatsCsv = "reports/stats.csv";
inline constexpr const char *kStatsTable = "reports/stats.txt";
}  // namespace artifacts

class Workdir {
 public:
  explicit Workdir(std::filesystem::path root);

  const std::filesystem::path &root() const { return root_; }
  std::filesystem::path Path(std::string_view relative) const;
  bool Exists(std::string_view relative) const;

  // Throws DataError naming `producer` when the artifact is missing.
  std::filesystem::path Require(std::string_view relative,
                                std::string_view producer) const;

  std::string Read(std::string_view relative, std::string_view producer) const;
  // Writes atomically and returns the reference for a manifest.
  ArtifactRef Write(std::string_view name, std::string_view relative,
                    std::string_view data) const;
  ArtifactRef Ref(std::string_view name, std::string_view relative) const;

  static std::string ManifestPath(std::string_view step);
  void WriteManifest(const Manifest &manifest) const;
  // Reads and version-checks the manifest of `step`.
  Manifest ReadManifest(std::string_view step) const;

 private:
  std::filesystem::path root_;
};

// Reference to an input outside the workdir.
ArtifactRef ExternalRef(std::string_view name, const std::filesystem::path &path);

// --- Steps, one per subcommand ---------------------------------------------

struct IngestResult {
  size_t documents = 0;
  size_t sentences = 0;
  size_t tokens = 0;
};
IngestResult RunIngest(const Workdir &wd, const std::filesystem::path &input,
                       InputFormat format);

struct ReduceOptions {
  std::filesystem::path npo;
  std::filesystem::path enm;
  std::filesystem::path roots;
  bool case_sensitive = false;
};
struct ReduceResult {
  size_t npo_concepts = 0;
  size_t npo_retained = 0;
  size_t enm_concepts = 0;
  size_t enm_retained = 0;
  std::vector<std::string> warnings;
};
ReduceResult RunReduceOntology(const Workdir &wd, const ReduceOptions &options);

// Label subtree file.
std::string SubtreesToJson(const std::vector<LabelSubtree> &subtrees);
std::vector<LabelSubtree> SubtreesFromJson(std::string_view text,
                                           std::string_view where);

struct ExpandResult {
  size_t base_terms = 0;
  size_t candidates = 0;
};
ExpandResult RunExpandVariants(const Workdir &wd);

struct BuildLexiconResult {
  size_t terms = 0;
  std::vector<std::string> warnings;
};
// `ledger` defaults to the workdir ledger; a missing ledger counts as empty.
BuildLexiconResult RunBuildLexicon(
    const Workdir &wd, const std::optional<std::filesystem::path> &ledger);

struct AnnotateResult {
  size_t sentences = 0;
  uint64_t entities = 0;
};
AnnotateResult RunAnnotate(const Workdir &wd);

void RunStats(const Workdir &wd);

struct FoldOptions {
  AblationMode mode = AblationMode::kRandomFold;
  int k = 5;
  uint64_t seed = 42;
  MixedPolicy mixed = MixedPolicy::kToTest;
};
struct FoldResult {
  std::vector<AblationPlan> plans;
  std::vector<FoldSplit> splits;
  std::vector<std::string> warnings;
};
// Random mode writes k plans; frequency mode writes one plan named after
// the mode. Files: folds/<plan_id>.plan.json and folds/<plan_id>.split.json.
FoldResult RunMakeFolds(const Workdir &wd, const FoldOptions &options);

struct TrainOptions {
  std::string model;                // output name
  std::optional<std::string> plan;  // train on this plan's train split
  TrainConfig config;
};
struct TrainResult {
  std::vector<EpochStats> epochs;
  size_t sentences = 0;
};
TrainResult RunTrain(const Workdir &wd, const TrainOptions &options);

// Reannotates the full corpus: predictions/<model>.conll.
void RunPredict(const Workdir &wd, const std::string &model);

// Scores predictions on the model's evaluation set: the test split of the
// plan it was trained on, or the whole corpus.
EvalReport RunEvaluate(const Workdir &wd, const std::string &model);

DiscoveryReport RunDiscover(const Workdir &wd, const std::string &model,
                            const std::optional<std::filesystem::path> &judgments);

RefoundReport RunRefound(const Workdir &wd, const std::string &model,
                         std::optional<std::string> plan, bool any_label);

// Loaders shared by the service and the protocol.
Corpus LoadCorpus(const Workdir &wd);
Vocabulary LoadVocabulary(const Workdir &wd);
AnnotatedCorpus LoadAnnotated(const Workdir &wd);
AblationPlan LoadPlan(const Workdir &wd, const std::string &plan_id);
FoldSplit LoadSplit(const Workdir &wd, const std::string &plan_id);
NormalizeOptions LoadNormalizeOptions(const Workdir &wd);

}  // namespace dsner

#endif  // DSNER_PIPELINE_H_
