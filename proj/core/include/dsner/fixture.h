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


#ifndef DSNER_FIXTURE_H_
#define DSNER_FIXTURE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dsner/labels.h"

namespace dsner {

// Synthetic nanomaterials corpus plus the ontologies, root assignments,
// curation ledger and discovery judgments it was generated from. Sentences
// come from slot templates filled with Zipf-distributed terms per label.
struct FixtureOptions {
  uint64_t seed = 42;
  size_t sentences = 5000;
  size_t sentences_per_document = 100;
};

struct FixtureTerm {
  std::string surface;  // normalized
  Label label;
};

struct Fixture {
  std::string corpus_jsonl;
  std::string npo_csv;
  std::string enm_csv;
  std::string roots_jsonl;
  std::string ledger_jsonl;
  std::string judgments_jsonl;

  // Surfaces placed in entity slots but absent from every ontology.
  std::vector<FixtureTerm> planted;
  // The vocabulary curation is expected to produce, sorted by (label,
  // surface).
  std::vector<FixtureTerm> expected_vocabulary;
};

Fixture GenerateFixture(const FixtureOptions &options = {});

// File names inside a fixture directory.
inline constexpr const char *kFixtureCorpus = "corpus.jsonl";
inline constexpr const char *kFixtureNpo = "npo.csv";
inline constexpr const char *kFixtureEnm = "enm.csv";
inline constexpr const char *kFixtureRoots = "roots.jsonl";
inline constexpr const char *kFixtureLedger = "ledger.jsonl";
inline constexpr const char *kFixtureJudgments = "judgments.jsonl";

void WriteFixture(const Fixture &fixture, const std::filesystem::path &dir);

}  // namespace dsner

#endif  // DSNER_FIXTURE_H_
