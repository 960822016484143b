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


#ifndef DSNER_PROTOCOL_H_
#define DSNER_PROTOCOL_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dsner/ablation.h"
#include "dsner/eval.h"
#include "dsner/pipeline.h"

namespace dsner {

struct ProtocolInputs {
  std::filesystem::path corpus;
  InputFormat format = InputFormat::kJsonl;
  std::filesystem::path npo;
  std::filesystem::path enm;
  std::filesystem::path roots;
  std::optional<std::filesystem::path> ledger;
  std::optional<std::filesystem::path> judgments;
};

struct ProtocolOptions {
  uint64_t seed = 42;
  std::vector<int> full_epochs = {5, 20};
  int ablation_epochs = 1;
  MixedPolicy mixed = MixedPolicy::kToTest;
  bool case_sensitive = false;
  bool any_label = false;
  bool gazetteer_features = false;  // full-data runs only
};

struct FullRun {
  int epochs = 0;
  EvalReport eval;
  DiscoveryReport discovery;
};

struct FoldRun {
  AblationPlan plan;
  FoldSplit split;
  EvalReport eval;
  RefoundReport refound;
};

struct ProtocolResult {
  std::vector<FullRun> full;
  std::vector<FoldRun> folds_20;  // A-E
  std::vector<FoldRun> folds_33;  // F-H
  std::vector<FoldRun> frequency;  // one per frequency mode
};

// Report bundle, relative to the workdir.
inline constexpr const char *kProtocolDir = "reports/protocol";

// Runs every pipeline step on the inputs, then the full-data, random-fold
// and frequency-ablation experiments, and writes the text tables plus
// report.jsonl under kProtocolDir.
ProtocolResult RunPaperProtocol(
    const Workdir &wd, const ProtocolInputs &inputs,
    const ProtocolOptions &options,
    const std::function<void(const std::string &)> &log = nullptr);

// Mean and population standard deviation.
struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};
MeanSd ComputeMeanSd(const std::vector<double> &values);

// Bundle files by name.
std::map<std::string, std::string> RenderProtocolBundle(
    const ProtocolResult &result, const std::string &vocabulary_table,
    const std::string &summary);

}  // namespace dsner

#endif  // DSNER_PROTOCOL_H_
