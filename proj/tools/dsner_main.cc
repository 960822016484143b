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


// dsner: distant-supervision NER pipeline.
//
// Every step reads and writes artifacts under a workdir (--workdir or
// $DSNER_WORKDIR) and records a manifest in <workdir>/manifests/.

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dsner/error.h"
#include "dsner/fixture.h"
#include "dsner/pipeline.h"
#include "dsner/protocol.h"
#include "dsner/service.h"

namespace fs = std::filesystem;

namespace dsner {
namespace {

// Data goes to stdout when it is piped or redirected; on a terminal it is
// shown on stderr so stdout stays clean.
void Emit(const std::string &data) {
  std::FILE *out = isatty(STDOUT_FILENO) ? stderr : stdout;
  std::fputs(data.c_str(), out);
  if (!data.empty() && data.back() != '\n') std::fputc('\n', out);
  std::fflush(out);
}

void Note(const std::string &message) { std::cerr << message << "\n"; }

struct Flags {
  std::string workdir;
  uint64_t seed = 42;
  int epochs = 0;  // 0: subcommand default
  int k = 5;
  double fraction = 0.0;
  std::string mode = "random_fold";
  bool case_sensitive = false;
  bool drop_mixed = false;
  bool gazetteer_features = false;
  bool any_label = false;

  std::string input;
  std::string format = "jsonl";
  std::string npo, enm, roots;
  std::string ledger;
  std::string judgments;
  std::string model;
  std::string plan;
  std::string out;
  size_t sentences = FixtureOptions{}.sentences;
  std::string host = "127.0.0.1";
  int port = CurationService::kDefaultPort;
};

Workdir MakeWorkdir(const Flags &f) {
  std::string root = f.workdir;
  if (root.empty()) {
    const char *env = std::getenv("DSNER_WORKDIR");
    if (env != nullptr) root = env;
  }
  if (root.empty()) throw UsageError("no workdir: pass --workdir or set DSNER_WORKDIR");
  fs::create_directories(root);
  return Workdir(root);
}

InputFormat ParseFormat(const std::string &name) {
  if (name == "jsonl") return InputFormat::kJsonl;
  if (name == "plain") return InputFormat::kPlain;
  throw UsageError("unknown --format '" + name + "' (jsonl or plain)");
}

std::optional<fs::path> OptionalPath(const std::string &p) {
  if (p.empty()) return std::nullopt;
  return fs::path(p);
}

int FoldCount(const Flags &f, const CLI::App &cmd) {
  if (cmd.count("--fraction") == 0) return f.k;
  if (cmd.count("--k") != 0) throw UsageError("pass either --k or --fraction");
  if (!(f.fraction > 0.0 && f.fraction < 1.0)) {
    throw UsageError("--fraction must lie in (0, 1)");
  }
  const int k = static_cast<int>(std::lround(1.0 / f.fraction));
  if (k < 2 || std::abs(1.0 / k - f.fraction) > 0.01) {
    throw UsageError("--fraction must be close to 1/k for an integer k >= 2");
  }
  return k;
}

std::string ReadArtifact(const Workdir &wd, const std::string &relative) {
  return wd.Read(relative, "the producing step");
}

int Main(int argc, char **argv) {
  CLI::App app{"Distant-supervision NER pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ToolVersion()));
  Flags f;

  auto workdir_opt = [&](CLI::App *cmd) {
    cmd->add_option("--workdir", f.workdir, "Artifact directory (default $DSNER_WORKDIR)");
  };
  auto seed_opt = [&](CLI::App *cmd) {
    cmd->add_option("--seed", f.seed, "PRNG seed")->capture_default_str();
  };

  CLI::App *fixtures = app.add_subcommand("fixtures", "Synthetic fixture corpus");
  fixtures->require_subcommand(1);
  CLI::App *generate = fixtures->add_subcommand("generate", "Write the synthetic fixture");
  seed_opt(generate);
  generate->add_option("--out", f.out, "Output directory")->required();
  generate->add_option("--sentences", f.sentences, "Corpus size")->capture_default_str();

  CLI::App *ingest = app.add_subcommand("ingest", "Read a pre-segmented corpus");
  workdir_opt(ingest);
  ingest->add_option("input", f.input, "Corpus file")->required();
  ingest->add_option("--format", f.format, "jsonl or plain")->capture_default_str();

  CLI::App *reduce = app.add_subcommand("reduce-ontology",
                                        "Reduce ontologies and extract label subtrees");
  workdir_opt(reduce);
  reduce->add_option("--npo", f.npo, "NPO concept CSV")->required();
  reduce->add_option("--enm", f.enm, "eNanoMapper concept CSV")->required();
  reduce->add_option("--roots", f.roots, "Label root assignments (jsonl)")->required();
  reduce->add_flag("--case-sensitive", f.case_sensitive, "Match terms case-sensitively");

  CLI::App *expand = app.add_subcommand("expand-variants", "Generate variant candidates");
  workdir_opt(expand);

  CLI::App *build = app.add_subcommand("build-lexicon", "Apply the curation ledger");
  workdir_opt(build);
  build->add_option("--ledger", f.ledger, "Ledger jsonl (default: workdir ledger)");

  CLI::App *annotate = app.add_subcommand("annotate", "Gazetteer-annotate the corpus");
  workdir_opt(annotate);

  CLI::App *stats = app.add_subcommand("stats", "Vocabulary statistics");
  workdir_opt(stats);

  CLI::App *folds = app.add_subcommand("make-folds", "Write ablation plans and splits");
  workdir_opt(folds);
  seed_opt(folds);
  folds->add_option("--k", f.k, "Random folds")->capture_default_str();
  folds->add_option("--fraction", f.fraction, "Ablated share per fold (1/k)");
  folds->add_option("--mode", f.mode,
                    "random_fold, top10, top10_keep_mft, middle10 or top10_only")
      ->capture_default_str();
  folds->add_flag("--drop-mixed", f.drop_mixed, "Drop mixed test sentences");

  CLI::App *train = app.add_subcommand("train", "Train the perceptron tagger");
  workdir_opt(train);
  seed_opt(train);
  train->add_option("--model", f.model, "Model name")->required();
  train->add_option("--plan", f.plan, "Train on this plan's training split");
  train->add_option("--epochs", f.epochs, "Training epochs (default 5)");
  train->add_flag("--gazetteer-features", f.gazetteer_features,
                  "Add lexicon match features");

  CLI::App *predict = app.add_subcommand("predict", "Reannotate the corpus");
  workdir_opt(predict);
  predict->add_option("--model", f.model, "Model name")->required();

  CLI::App *evaluate = app.add_subcommand("evaluate", "Score predictions");
  workdir_opt(evaluate);
  evaluate->add_option("--model", f.model, "Model name")->required();

  CLI::App *discover = app.add_subcommand("discover", "List newly found entities");
  workdir_opt(discover);
  discover->add_option("--model", f.model, "Model name")->required();
  discover->add_option("--judgments", f.judgments, "Expert judgments jsonl");

  CLI::App *refound = app.add_subcommand("refound", "Recall of ablated terms");
  workdir_opt(refound);
  refound->add_option("--model", f.model, "Model name")->required();
  refound->add_option("--plan", f.plan, "Plan (default: the training plan)");
  refound->add_flag("--any-label", f.any_label, "Ignore the predicted label");

  CLI::App *protocol = app.add_subcommand("run-paper-protocol",
                                          "Run every experiment end to end");
  workdir_opt(protocol);
  seed_opt(protocol);
  protocol->add_option("--corpus", f.input, "Corpus file")->required();
  protocol->add_option("--format", f.format, "jsonl or plain")->capture_default_str();
  protocol->add_option("--npo", f.npo, "NPO concept CSV")->required();
  protocol->add_option("--enm", f.enm, "eNanoMapper concept CSV")->required();
  protocol->add_option("--roots", f.roots, "Label root assignments")->required();
  protocol->add_option("--ledger", f.ledger, "Curation ledger");
  protocol->add_option("--judgments", f.judgments, "Expert judgments");
  protocol->add_option("--epochs", f.epochs, "Epochs for ablation runs (default 1)");
  protocol->add_flag("--case-sensitive", f.case_sensitive, "Match case-sensitively");
  protocol->add_flag("--drop-mixed", f.drop_mixed, "Drop mixed test sentences");
  protocol->add_flag("--gazetteer-features", f.gazetteer_features,
                     "Lexicon features in the full-data runs");
  protocol->add_flag("--any-label", f.any_label, "Refound ignores labels");

  CLI::App *serve = app.add_subcommand("serve", "Run the curation API");
  workdir_opt(serve);
  serve->add_option("--host", f.host)->capture_default_str();
  serve->add_option("--port", f.port)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*generate) {
      FixtureOptions options;
      options.seed = f.seed;
      options.sentences = f.sentences;
      WriteFixture(GenerateFixture(options), f.out);
      Note("wrote fixture to " + f.out);
      return 0;
    }

    const Workdir wd = MakeWorkdir(f);
    if (*ingest) {
      IngestResult r = RunIngest(wd, f.input, ParseFormat(f.format));
      Note("ingested " + std::to_string(r.documents) + " documents, " +
           std::to_string(r.sentences) + " sentences");
    } else if (*reduce) {
      ReduceResult r = RunReduceOntology(
          wd, ReduceOptions{f.npo, f.enm, f.roots, f.case_sensitive});
      for (const std::string &w : r.warnings) Note("warning: " + w);
      Note("reduced NPO " + std::to_string(r.npo_concepts) + " -> " +
           std::to_string(r.npo_retained) + ", ENM " +
           std::to_string(r.enm_concepts) + " -> " + std::to_string(r.enm_retained));
    } else if (*expand) {
      ExpandResult r = RunExpandVariants(wd);
      Note(std::to_string(r.base_terms) + " base terms, " +
           std::to_string(r.candidates) + " candidates");
      Emit(ReadArtifact(wd, artifacts::kCandidates));
    } else if (*build) {
      BuildLexiconResult r = RunBuildLexicon(wd, OptionalPath(f.ledger));
      for (const std::string &w : r.warnings) Note("warning: " + w);
      Note("vocabulary: " + std::to_string(r.terms) + " terms");
    } else if (*annotate) {
      AnnotateResult r = RunAnnotate(wd);
      Note("annotated " + std::to_string(r.entities) + " entities in " +
           std::to_string(r.sentences) + " sentences");
    } else if (*stats) {
      RunStats(wd);
      Emit(ReadArtifact(wd, artifacts::kStatsTable));
    } else if (*folds) {
      FoldOptions options;
      options.k = FoldCount(f, *folds);
      std::optional<AblationMode> mode = ParseAblationMode(f.mode);
      if (!mode) throw UsageError("unknown --mode '" + f.mode + "'");
      options.mode = *mode;
      options.seed = f.seed;
      options.mixed = f.drop_mixed ? MixedPolicy::kDrop : MixedPolicy::kToTest;
      FoldResult r = RunMakeFolds(wd, options);
      for (const std::string &w : r.warnings) Note("warning: " + w);
      for (const FoldSplit &s : r.splits) {
        Note(s.plan_id + ": train " + std::to_string(s.train.size()) + ", test " +
             std::to_string(s.test.size()) + ", dropped " +
             std::to_string(s.dropped.size()));
      }
    } else if (*train) {
      TrainOptions options;
      options.model = f.model;
      if (!f.plan.empty()) options.plan = f.plan;
      options.config.epochs = f.epochs > 0 ? f.epochs : 5;
      options.config.seed = f.seed;
      options.config.gazetteer_features = f.gazetteer_features;
      TrainResult r = RunTrain(wd, options);
      for (const EpochStats &e : r.epochs) {
        char line[96];
        std::snprintf(line, sizeof(line), "epoch %d: online accuracy %.4f",
                      e.epoch, e.accuracy());
        Note(line);
      }
    } else if (*predict) {
      RunPredict(wd, f.model);
      Note("wrote predictions/" + f.model + ".conll");
    } else if (*evaluate) {
      RunEvaluate(wd, f.model);
      Emit(ReadArtifact(wd, "reports/eval-" + f.model + ".txt"));
    } else if (*discover) {
      DiscoveryReport r = RunDiscover(wd, f.model, OptionalPath(f.judgments));
      Note(std::to_string(r.count()) + " new entities");
      Emit(ReadArtifact(wd, "reports/discover-" + f.model + ".jsonl"));
    } else if (*refound) {
      std::optional<std::string> plan;
      if (!f.plan.empty()) plan = f.plan;
      RefoundReport r = RunRefound(wd, f.model, plan, f.any_label);
      Note("refound " + std::to_string(r.retrieved.size()) + " of " +
           std::to_string(r.ablated.size()) + " ablated terms");
      Emit(ReadArtifact(wd, "reports/refound-" + f.model + ".jsonl"));
    } else if (*protocol) {
      ProtocolInputs inputs;
      inputs.corpus = f.input;
      inputs.format = ParseFormat(f.format);
      inputs.npo = f.npo;
      inputs.enm = f.enm;
      inputs.roots = f.roots;
      inputs.ledger = OptionalPath(f.ledger);
      inputs.judgments = OptionalPath(f.judgments);
      ProtocolOptions options;
      options.seed = f.seed;
      if (f.epochs > 0) options.ablation_epochs = f.epochs;
      options.mixed = f.drop_mixed ? MixedPolicy::kDrop : MixedPolicy::kToTest;
      options.case_sensitive = f.case_sensitive;
      options.any_label = f.any_label;
      options.gazetteer_features = f.gazetteer_features;
      RunPaperProtocol(wd, inputs, options, Note);
      Emit(ReadArtifact(wd, std::string(kProtocolDir) + "/summary.txt"));
    } else if (*serve) {
      CurationService service(wd);
      Note("serving " + wd.root().string() + " on http://" + f.host + ":" +
           std::to_string(f.port));
      if (!service.Listen(f.host, f.port)) {
        Note("error: cannot listen on " + f.host + ":" + std::to_string(f.port));
        return 2;
      }
    }
    return 0;
  } catch (const UsageError &e) {
    Note(std::string("usage error: ") + e.what());
    return 1;
  } catch (const DataError &e) {
    Note(std::string("error: ") + e.what());
    return 2;
  } catch (const fs::filesystem_error &e) {
    Note(std::string("error: ") + e.what());
    return 2;
  }
}

}  // namespace
}  // namespace dsner

int main(int argc, char **argv) { return dsner::Main(argc, argv); }
