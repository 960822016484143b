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


#include "dsner/pipeline.h"

#include <gtest/gtest.h>

#include <fstream>

#include "dsner/error.h"
#include "dsner/fixture.h"
#include "test_util.h"

namespace dsner {
namespace {

namespace fs = std::filesystem;
using testing::FixtureDir;
using testing::TempDir;

std::string Slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

TEST(ManifestTest, JsonRoundTrip) {
  Manifest m;
  m.step = "make-folds-k5";
  m.tool_version = std::string(ToolVersion());
  m.seed = 42;
  m.options = {{"k", "5"}, {"mode", "random"}};
  m.inputs = {{"vocabulary", "lexicon/vocabulary.csv", std::string(64, 'a')}};
  m.outputs = {{"plan", "folds/A.plan.json", std::string(64, 'b')}};
  const std::string text = m.ToJson();
  EXPECT_EQ(text.back(), '\n');
  Manifest back = Manifest::FromJson(text, "mem");
  EXPECT_EQ(back, m);
  EXPECT_EQ(back.ToJson(), text);
  EXPECT_THROW(Manifest::FromJson("{", "mem"), DataError);
  std::string future = text;
  future.replace(future.find("\"format_version\": 1"), 19, "\"format_version\": 2");
  EXPECT_THROW(Manifest::FromJson(future, "mem"), DataError);
}

TEST(WorkdirTest, MissingArtifactNamesTheProducingStep) {
  TempDir tmp;
  Workdir wd(tmp.path());
  try {
    RunAnnotate(wd);
    FAIL() << "expected DataError";
  } catch (const DataError &e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("run `dsner reduce-ontology` first"), std::string::npos) << what;
  }
  try {
    RunTrain(wd, TrainOptions{"m", std::nullopt, {}});
    FAIL() << "expected DataError";
  } catch (const DataError &e) {
    EXPECT_NE(std::string(e.what()).find("annotate"), std::string::npos) << e.what();
  }
}

TEST(PipelineTest, StepsChainAndRerunIdentically) {
  TempDir a, b;
  Workdir wa(a.path()), wb(b.path());
  testing::RunLexiconSteps(wa, FixtureDir());
  testing::RunLexiconSteps(wb, FixtureDir());
  for (const char *step : {"ingest", "reduce-ontology", "expand-variants",
                           "build-lexicon", "annotate"}) {
    EXPECT_EQ(Slurp(wa.Path(Workdir::ManifestPath(step))),
              Slurp(wb.Path(Workdir::ManifestPath(step))))
        << step;
  }
  FoldOptions folds;
  RunMakeFolds(wa, folds);
  const std::string first = Slurp(wa.Path(Workdir::ManifestPath("make-folds-k5")));
  RunMakeFolds(wa, folds);
  EXPECT_EQ(Slurp(wa.Path(Workdir::ManifestPath("make-folds-k5"))), first);
  Manifest m = wa.ReadManifest("make-folds-k5");
  EXPECT_EQ(m.seed, 42u);
  EXPECT_EQ(m.outputs.size(), 10u);
  for (const ArtifactRef &out : m.outputs) {
    EXPECT_EQ(wa.Ref(out.name, out.path).sha256, out.sha256) << out.path;
  }

  // Annotate's manifest points at the exact bytes of its inputs.
  Manifest annotate = wa.ReadManifest("annotate");
  for (const ArtifactRef &in : annotate.inputs) {
    EXPECT_EQ(wa.Ref(in.name, in.path).sha256, in.sha256) << in.path;
  }
  EXPECT_EQ(LoadPlan(wa, "C").plan_id, "C");
  EXPECT_EQ(LoadSplit(wa, "C").corpus_sentences, 5000u);
  EXPECT_THROW(LoadPlan(wa, "Z"), DataError);
}

TEST(PipelineTest, TrainPredictEvaluate) {
  TempDir tmp;
  Workdir wd(tmp.path());
  testing::RunLexiconSteps(wd, FixtureDir());
  FoldOptions folds;
  folds.k = 3;
  RunMakeFolds(wd, folds);
  TrainOptions train{"fold-F", "F", {}};
  TrainResult t = RunTrain(wd, train);
  EXPECT_EQ(t.epochs.size(), 1u);
  EXPECT_EQ(t.sentences, LoadSplit(wd, "F").train.size());
  RunPredict(wd, "fold-F");
  EvalReport r = RunEvaluate(wd, "fold-F");
  EXPECT_EQ(r.sentences, LoadSplit(wd, "F").test.size());
  EXPECT_EQ(SumPerLabel(r), r.micro);
  RefoundReport refound = RunRefound(wd, "fold-F", std::nullopt, false);
  EXPECT_EQ(refound.plan_id, "F");
  EXPECT_EQ(refound.ablated.size(), LoadPlan(wd, "F").NumAblated());
  EXPECT_THROW(RunPredict(wd, "nope"), DataError);
}

TEST(PipelineTest, EmptyCorpusGivesEmptyAnnotation) {
  TempDir tmp;
  Workdir wd(tmp.path());
  const fs::path empty = tmp / "empty.jsonl";
  std::ofstream(empty).close();
  RunIngest(wd, empty, InputFormat::kJsonl);
  ReduceOptions reduce;
  reduce.npo = FixtureDir() / kFixtureNpo;
  reduce.enm = FixtureDir() / kFixtureEnm;
  reduce.roots = FixtureDir() / kFixtureRoots;
  RunReduceOntology(wd, reduce);
  RunExpandVariants(wd);
  RunBuildLexicon(wd, std::nullopt);
  AnnotateResult r = RunAnnotate(wd);
  EXPECT_EQ(r.sentences, 0u);
  EXPECT_EQ(r.entities, 0u);
  EXPECT_EQ(Slurp(wd.Path(artifacts::kAnnotated)), "");
  EXPECT_TRUE(fs::exists(wd.Path(Workdir::ManifestPath("annotate"))));
}

}  // namespace
}  // namespace dsner
