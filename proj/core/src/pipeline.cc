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

#include <fstream>
#include <regex>
#include <sstream>

#include "dsner/digest.h"
#include "dsner/error.h"
#include "json.hpp"

#ifndef DSNER_VERSION
#define DSNER_VERSION "0.0.0"
#endif

namespace dsner {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr const char *kProvenance = "corpus/provenance.json";

ordered_json RefsJson(const std::vector<ArtifactRef> &refs) {
  ordered_json a = ordered_json::array();
  for (const ArtifactRef &r : refs) {
    a.push_back({{"name", r.name}, {"path", r.path}, {"sha256", r.sha256}});
  }
  return a;
}

std::vector<ArtifactRef> RefsFromJson(const nlohmann::json &a) {
  std::vector<ArtifactRef> refs;
  for (const auto &r : a) {
    refs.push_back({r.at("name").get<std::string>(),
                    r.at("path").get<std::string>(),
                    r.at("sha256").get<std::string>()});
  }
  return refs;
}

std::string Bool(bool b) { return b ? "true" : "false"; }

void CheckName(std::string_view what, const std::string &name) {
  static const std::regex kName("[A-Za-z0-9_.-]+");
  if (name.empty() || !std::regex_match(name, kName) || name == "." ||
      name == "..") {
    throw UsageError(std::string(what) + " name '" + name +
                     "' must match [A-Za-z0-9_.-]+");
  }
}

std::string ModelPath(const std::string &model) {
  return "models/" + model + ".model";
}
std::string PredictionPath(const std::string &model) {
  return "predictions/" + model + ".conll";
}
std::string PlanPath(const std::string &plan) {
  return "folds/" + plan + ".plan.json";
}
std::string SplitPath(const std::string &plan) {
  return "folds/" + plan + ".split.json";
}

// Tags read from CoNLL re-attached to the ingested corpus, which carries
// the real document and sentence ids.
AnnotatedCorpus LoadTagged(const Workdir &wd, const std::string &relative,
                           std::string_view producer) {
  std::istringstream in(wd.Read(relative, producer));
  AnnotatedCorpus tagged = ParseConll(in);
  return AttachTags(LoadCorpus(wd), tagged);
}

std::vector<TermEntry> ReadTerms(const Workdir &wd, const char *relative,
                                 std::string_view producer) {
  std::istringstream in(wd.Read(relative, producer));
  return ReadTermCsv(in, relative);
}

std::string ConllText(const AnnotatedCorpus &corpus) { return ConllString(corpus); }

}  // namespace

std::string_view ToolVersion() { return DSNER_VERSION; }

std::string Manifest::ToJson() const {
  ordered_json j;
  j["format_version"] = format_version;
  j["step"] = step;
  j["tool_version"] = tool_version;
  j["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
  ordered_json opts = ordered_json::object();
  for (const auto &[k, v] : options) opts[k] = v;
  j["options"] = std::move(opts);
  j["inputs"] = RefsJson(inputs);
  j["outputs"] = RefsJson(outputs);
  return j.dump(2) + "\n";
}

Manifest Manifest::FromJson(std::string_view text, std::string_view where) {
  Manifest m;
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    m.format_version = j.at("format_version").get<int>();
    if (m.format_version != kFormatVersion) {
      throw DataError(std::string(where) + ": manifest format_version " +
                      std::to_string(m.format_version) + " is not supported");
    }
    m.step = j.at("step").get<std::string>();
    m.tool_version = j.at("tool_version").get<std::string>();
    if (!j.at("seed").is_null()) m.seed = j.at("seed").get<uint64_t>();
    for (const auto &[k, v] : j.at("options").items()) {
      m.options[k] = v.get<std::string>();
    }
    m.inputs = RefsFromJson(j.at("inputs"));
    m.outputs = RefsFromJson(j.at("outputs"));
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string(where) + ": malformed manifest: " + e.what());
  }
  return m;
}

Workdir::Workdir(fs::path root) : root_(std::move(root)) {}

fs::path Workdir::Path(std::string_view relative) const {
  return root_ / fs::path(std::string(relative));
}

bool Workdir::Exists(std::string_view relative) const {
  return fs::exists(Path(relative));
}

fs::path Workdir::Require(std::string_view relative,
                          std::string_view producer) const {
  fs::path p = Path(relative);
  if (!fs::exists(p)) {
    throw DataError("missing artifact " + p.string() + "; run `dsner " +
                    std::string(producer) + "` first");
  }
  return p;
}

std::string Workdir::Read(std::string_view relative,
                          std::string_view producer) const {
  return ReadFile(Require(relative, producer));
}

ArtifactRef Workdir::Write(std::string_view name, std::string_view relative,
                           std::string_view data) const {
  fs::path p = Path(relative);
  fs::create_directories(p.parent_path());
  WriteFile(p, data);
  return {std::string(name), std::string(relative), Sha256Hex(data)};
}

ArtifactRef Workdir::Ref(std::string_view name, std::string_view relative) const {
  return {std::string(name), std::string(relative), Sha256File(Path(relative))};
}

std::string Workdir::ManifestPath(std::string_view step) {
  return "manifests/" + std::string(step) + ".json";
}

void Workdir::WriteManifest(const Manifest &manifest) const {
  Write("manifest", ManifestPath(manifest.step), manifest.ToJson());
}

Manifest Workdir::ReadManifest(std::string_view step) const {
  const std::string rel = ManifestPath(step);
  return Manifest::FromJson(Read(rel, step), rel);
}

ArtifactRef ExternalRef(std::string_view name, const fs::path &path) {
  if (!fs::exists(path)) throw DataError("no such file: " + path.string());
  return {std::string(name), path.string(), Sha256File(path)};
}

namespace {

Manifest NewManifest(std::string step) {
  Manifest m;
  m.step = std::move(step);
  m.tool_version = std::string(ToolVersion());
  return m;
}

}  // namespace

// --- Loaders ----------------------------------------------------------------

Corpus LoadCorpus(const Workdir &wd) {
  wd.ReadManifest("ingest");
  std::istringstream in(wd.Read(artifacts::kCorpus, "ingest"));
  return ParseJsonlCorpus(in, artifacts::kCorpus);
}

NormalizeOptions LoadNormalizeOptions(const Workdir &wd) {
  Manifest m = wd.ReadManifest("reduce-ontology");
  NormalizeOptions options;
  options.case_sensitive = m.options["case_sensitive"] == "true";
  return options;
}

Vocabulary LoadVocabulary(const Workdir &wd) {
  wd.ReadManifest("build-lexicon");
  return Vocabulary(ReadTerms(wd, artifacts::kVocabulary, "build-lexicon"));
}

AnnotatedCorpus LoadAnnotated(const Workdir &wd) {
  wd.ReadManifest("annotate");
  return LoadTagged(wd, artifacts::kAnnotated, "annotate");
}

AblationPlan LoadPlan(const Workdir &wd, const std::string &plan_id) {
  CheckName("plan", plan_id);
  return PlanFromJson(wd.Read(PlanPath(plan_id), "make-folds"),
                      LoadVocabulary(wd));
}

FoldSplit LoadSplit(const Workdir &wd, const std::string &plan_id) {
  CheckName("plan", plan_id);
  return SplitFromJson(wd.Read(SplitPath(plan_id), "make-folds"));
}

// --- Steps ------------------------------------------------------------------

IngestResult RunIngest(const Workdir &wd, const fs::path &input,
                       InputFormat format) {
  Corpus corpus = Ingest(input, format);
  Manifest m = NewManifest("ingest");
  m.options["format"] = format == InputFormat::kJsonl ? "jsonl" : "plain";
  m.inputs.push_back(ExternalRef("source", input));

  std::ostringstream out;
  WriteJsonlCorpus(corpus, out);
  m.outputs.push_back(wd.Write("corpus", artifacts::kCorpus, out.str()));

  ordered_json provenance;
  provenance["source_path"] = corpus.provenance.source_path;
  provenance["ingested_at"] = corpus.provenance.ingested_at;
  wd.Write("provenance", kProvenance, provenance.dump(2) + "\n");
  wd.WriteManifest(m);

  IngestResult r;
  r.documents = corpus.documents.size();
  r.sentences = corpus.NumSentences();
  r.tokens = NumTokens(corpus);
  return r;
}

std::string SubtreesToJson(const std::vector<LabelSubtree> &subtrees) {
  ordered_json a = ordered_json::array();
  for (const LabelSubtree &st : subtrees) {
    ordered_json s;
    s["label"] = std::string(LabelName(st.label));
    s["depth"] = st.stats.depth;
    s["width"] = st.stats.width;
    ordered_json concepts = ordered_json::array();
    for (const LabelConcept &c : st.concepts) {
      ordered_json jc;
      jc["key"] = c.node.key;
      jc["source"] = std::string(SourceName(c.node.source));
      jc["preferred_label"] = c.node.preferred_label;
      jc["parent"] = c.parent ? ordered_json(*c.parent) : ordered_json(nullptr);
      jc["forms"] = c.forms;
      concepts.push_back(std::move(jc));
    }
    s["concepts"] = std::move(concepts);
    a.push_back(std::move(s));
  }
  return a.dump(2) + "\n";
}

std::vector<LabelSubtree> SubtreesFromJson(std::string_view text,
                                           std::string_view where) {
  std::vector<LabelSubtree> out;
  try {
    for (const auto &s : nlohmann::json::parse(text)) {
      LabelSubtree st;
      st.label = ParseLabelOrThrow(s.at("label").get<std::string>(), where);
      st.stats.depth = s.at("depth").get<int>();
      st.stats.width = s.at("width").get<int>();
      for (const auto &jc : s.at("concepts")) {
        LabelConcept c;
        c.node.key = jc.at("key").get<std::string>();
        auto source = ParseSource(jc.at("source").get<std::string>());
        if (!source) throw DataError(std::string(where) + ": unknown source");
        c.node.source = *source;
        c.node.preferred_label = jc.at("preferred_label").get<std::string>();
        if (!jc.at("parent").is_null()) c.parent = jc.at("parent").get<std::string>();
        c.forms = jc.at("forms").get<std::vector<std::string>>();
        st.concepts.push_back(std::move(c));
      }
      out.push_back(std::move(st));
    }
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string(where) + ": " + e.what());
  }
  return out;
}

ReduceResult RunReduceOntology(const Workdir &wd, const ReduceOptions &options) {
  Corpus corpus = LoadCorpus(wd);
  NormalizeOptions norm;
  norm.case_sensitive = options.case_sensitive;
  Manifest m = NewManifest("reduce-ontology");
  m.options["case_sensitive"] = Bool(options.case_sensitive);
  m.inputs.push_back(wd.Ref("corpus", artifacts::kCorpus));
  m.inputs.push_back(ExternalRef("npo", options.npo));
  m.inputs.push_back(ExternalRef("enm", options.enm));
  m.inputs.push_back(ExternalRef("roots", options.roots));

  ReduceResult result;
  std::map<OntologySource, ReducedOntology> reduced;
  struct Source {
    OntologySource source;
    const fs::path *path;
    const char *reduced_path;
    const char *occurrence_path;
  };
  for (const Source &s :
       {Source{OntologySource::kNpo, &options.npo, artifacts::kNpoReduced,
               artifacts::kNpoOccurrences},
        Source{OntologySource::kEnm, &options.enm, artifacts::kEnmReduced,
               artifacts::kEnmOccurrences}}) {
    Ontology ontology = ParseOntologyCsv(*s.path, s.source);
    for (const std::string &d : ontology.dangling_parents()) {
      result.warnings.push_back(std::string(SourceName(s.source)) +
                                ": dangling parent " + d);
    }
    OccurrenceIndex occ = CountOccurrences(ontology, corpus, norm);
    ReducedOntology r = Reduce(ontology, occ);
    std::ostringstream csv;
    WriteOntologyCsv(r.ontology, csv);
    m.outputs.push_back(wd.Write(std::string(SourceName(s.source)) + "_reduced",
                                 s.reduced_path, csv.str()));
    std::ostringstream occ_csv;
    WriteOccurrenceIndex(occ, occ_csv);
    m.outputs.push_back(wd.Write(
        std::string(SourceName(s.source)) + "_occurrences", s.occurrence_path,
        occ_csv.str()));
    if (s.source == OntologySource::kNpo) {
      result.npo_concepts = ontology.size();
      result.npo_retained = r.ontology.size();
    } else {
      result.enm_concepts = ontology.size();
      result.enm_retained = r.ontology.size();
    }
    reduced.emplace(s.source, std::move(r));
  }

  std::ifstream roots_in(options.roots);
  if (!roots_in) throw DataError("cannot open " + options.roots.string());
  std::vector<RootAssignment> roots =
      ParseRootAssignments(roots_in, options.roots.string());
  std::vector<LabelSubtree> subtrees =
      ExtractLabelSubtrees(reduced, roots, norm);
  m.outputs.push_back(
      wd.Write("subtrees", artifacts::kSubtrees, SubtreesToJson(subtrees)));
  wd.WriteManifest(m);
  return result;
}

ExpandResult RunExpandVariants(const Workdir &wd) {
  const NormalizeOptions norm = LoadNormalizeOptions(wd);
  std::vector<LabelSubtree> subtrees = SubtreesFromJson(
      wd.Read(artifacts::kSubtrees, "reduce-ontology"), artifacts::kSubtrees);
  Corpus corpus = LoadCorpus(wd);

  Manifest m = NewManifest("expand-variants");
  m.inputs.push_back(wd.Ref("subtrees", artifacts::kSubtrees));
  m.inputs.push_back(wd.Ref("corpus", artifacts::kCorpus));

  std::vector<TermEntry> base = BaseTerms(subtrees);
  std::ostringstream base_csv;
  WriteTermCsv(base, base_csv);
  m.outputs.push_back(wd.Write("base_terms", artifacts::kBaseTerms, base_csv.str()));

  VariantResult variants = GenerateVariants(base, corpus, norm);
  std::ostringstream cand_csv;
  WriteTermCsv(variants.candidates, cand_csv);
  m.outputs.push_back(
      wd.Write("candidates", artifacts::kCandidates, cand_csv.str()));
  TermCounts freq;
  for (const TermEntry &c : variants.candidates) {
    freq[{c.surface, c.label}] = variants.frequency.at(c.surface);
  }
  std::ostringstream freq_csv;
  WriteTermCounts(freq, freq_csv);
  m.outputs.push_back(wd.Write("candidate_frequency",
                               artifacts::kCandidateFrequency, freq_csv.str()));
  wd.WriteManifest(m);
  return {base.size(), variants.candidates.size()};
}

BuildLexiconResult RunBuildLexicon(const Workdir &wd,
                                   const std::optional<fs::path> &ledger) {
  wd.ReadManifest("expand-variants");
  std::vector<TermEntry> base =
      ReadTerms(wd, artifacts::kBaseTerms, "expand-variants");
  std::vector<TermEntry> candidates =
      ReadTerms(wd, artifacts::kCandidates, "expand-variants");

  Manifest m = NewManifest("build-lexicon");
  m.inputs.push_back(wd.Ref("base_terms", artifacts::kBaseTerms));
  m.inputs.push_back(wd.Ref("candidates", artifacts::kCandidates));

  const fs::path ledger_path = ledger ? *ledger : wd.Path(artifacts::kLedger);
  std::vector<CurationDecision> decisions;
  if (fs::exists(ledger_path)) {
    decisions = ReadLedgerFile(ledger_path);
    m.inputs.push_back(ExternalRef("ledger", ledger_path));
  } else if (ledger) {
    throw DataError("no such ledger: " + ledger_path.string());
  }

  CurationResult curated = ApplyCuration(base, candidates, decisions);
  std::ostringstream vocab_csv;
  WriteTermCsv(curated.vocabulary.entries(), vocab_csv);
  m.outputs.push_back(
      wd.Write("vocabulary", artifacts::kVocabulary, vocab_csv.str()));
  std::string warnings;
  for (const std::string &w : curated.warnings) warnings += w + "\n";
  m.outputs.push_back(
      wd.Write("warnings", artifacts::kCurationWarnings, warnings));
  wd.WriteManifest(m);
  return {curated.vocabulary.size(), curated.warnings};
}

AnnotateResult RunAnnotate(const Workdir &wd) {
  const NormalizeOptions norm = LoadNormalizeOptions(wd);
  Vocabulary vocabulary = LoadVocabulary(wd);
  Corpus corpus = LoadCorpus(wd);
  Matcher matcher = Matcher::Compile(vocabulary, norm);
  AnnotationResult annotated = AnnotateCorpus(matcher, corpus);

  Manifest m = NewManifest("annotate");
  m.options["case_sensitive"] = Bool(norm.case_sensitive);
  m.inputs.push_back(wd.Ref("vocabulary", artifacts::kVocabulary));
  m.inputs.push_back(wd.Ref("corpus", artifacts::kCorpus));
  m.outputs.push_back(wd.Write("annotated", artifacts::kAnnotated,
                               ConllText(annotated.corpus)));
  std::ostringstream counts;
  WriteTermCounts(annotated.counts, counts);
  m.outputs.push_back(wd.Write("term_counts", artifacts::kTermCounts, counts.str()));
  wd.WriteManifest(m);

  AnnotateResult r;
  r.sentences = annotated.corpus.NumSentences();
  for (const auto &[key, n] : annotated.counts) r.entities += n;
  return r;
}

void RunStats(const Workdir &wd) {
  Vocabulary vocabulary = LoadVocabulary(wd);
  AnnotatedCorpus annotated = LoadAnnotated(wd);
  std::vector<LabelSubtree> subtrees = SubtreesFromJson(
      wd.Read(artifacts::kSubtrees, "reduce-ontology"), artifacts::kSubtrees);
  std::map<Label, SubtreeStats> shapes;
  for (const LabelSubtree &st : subtrees) shapes[st.label] = st.stats;
  std::vector<LabelStatsRow> rows = VocabularyStats(vocabulary, annotated, shapes);

  Manifest m = NewManifest("stats");
  m.inputs.push_back(wd.Ref("vocabulary", artifacts::kVocabulary));
  m.inputs.push_back(wd.Ref("annotated", artifacts::kAnnotated));
  m.inputs.push_back(wd.Ref("subtrees", artifacts::kSubtrees));
  std::ostringstream csv, table;
  WriteStatsCsv(rows, csv);
  WriteStatsTable(rows, table);
  m.outputs.push_back(wd.Write("stats_csv", artifacts::kStatsCsv, csv.str()));
  m.outputs.push_back(wd.Write("stats_table", artifacts::kStatsTable, table.str()));
  wd.WriteManifest(m);
}

FoldResult RunMakeFolds(const Workdir &wd, const FoldOptions &options) {
  if (options.mode == AblationMode::kRandomFold && options.k != 5 && options.k != 3) {
    throw UsageError("--k must be 5 or 3");
  }
  const NormalizeOptions norm = LoadNormalizeOptions(wd);
  Vocabulary vocabulary = LoadVocabulary(wd);
  AnnotatedCorpus annotated = LoadAnnotated(wd);

  FoldResult result;
  std::string step;
  Manifest m;
  if (options.mode == AblationMode::kRandomFold) {
    result.plans =
        MakeRandomPlans(vocabulary, options.k, options.seed, &result.warnings);
    m = NewManifest("make-folds-k" + std::to_string(options.k));
    m.options["k"] = std::to_string(options.k);
  } else {
    std::istringstream in(wd.Read(artifacts::kTermCounts, "annotate"));
    TermCounts counts = ReadTermCounts(in, artifacts::kTermCounts);
    result.plans.push_back(
        MakeFrequencyPlan(vocabulary, counts, options.mode, options.seed));
    m = NewManifest("make-folds-" + std::string(AblationModeName(options.mode)));
    m.inputs.push_back(wd.Ref("term_counts", artifacts::kTermCounts));
  }
  m.seed = options.seed;
  m.options["mode"] = std::string(AblationModeName(options.mode));
  m.options["drop_mixed"] = Bool(options.mixed == MixedPolicy::kDrop);
  m.inputs.push_back(wd.Ref("vocabulary", artifacts::kVocabulary));
  m.inputs.push_back(wd.Ref("annotated", artifacts::kAnnotated));

  for (const AblationPlan &plan : result.plans) {
    FoldSplit split = SplitCorpus(annotated, plan, options.mixed, norm);
    m.outputs.push_back(
        wd.Write("plan_" + plan.plan_id, PlanPath(plan.plan_id), PlanToJson(plan)));
    m.outputs.push_back(wd.Write("split_" + plan.plan_id, SplitPath(plan.plan_id),
                                 SplitToJson(split)));
    result.splits.push_back(std::move(split));
  }
  wd.WriteManifest(m);
  return result;
}

TrainResult RunTrain(const Workdir &wd, const TrainOptions &options) {
  CheckName("model", options.model);
  if (options.plan && options.config.gazetteer_features) {
    throw UsageError(
        "--gazetteer-features is only available for full-data training");
  }
  AnnotatedCorpus annotated = LoadAnnotated(wd);
  Manifest m = NewManifest("train-" + options.model);
  m.seed = options.config.seed;
  m.options["epochs"] = std::to_string(options.config.epochs);
  m.options["batch_size"] = std::to_string(options.config.batch_size);
  m.options["gazetteer_features"] = Bool(options.config.gazetteer_features);
  m.options["plan"] = options.plan.value_or("");
  m.inputs.push_back(wd.Ref("annotated", artifacts::kAnnotated));

  AnnotatedCorpus train = annotated;
  if (options.plan) {
    FoldSplit split = LoadSplit(wd, *options.plan);
    train = SubsetCorpus(annotated, split.train);
    m.inputs.push_back(wd.Ref("split", SplitPath(*options.plan)));
  }
  std::optional<Matcher> gazetteer;
  if (options.config.gazetteer_features) {
    gazetteer = Matcher::Compile(LoadVocabulary(wd), LoadNormalizeOptions(wd));
    m.inputs.push_back(wd.Ref("vocabulary", artifacts::kVocabulary));
  }
  TrainResult result;
  PerceptronTagger model = PerceptronTagger::Train(
      train, options.config, gazetteer ? &*gazetteer : nullptr,
      [&](const EpochStats &e) { result.epochs.push_back(e); });
  result.sentences = train.NumSentences();

  m.outputs.push_back(
      wd.Write("model", ModelPath(options.model), model.SaveToString()));
  std::string log;
  for (const EpochStats &e : result.epochs) {
    ordered_json j;
    j["epoch"] = e.epoch;
    j["tokens"] = e.tokens;
    j["correct"] = e.correct;
    j["accuracy"] = e.accuracy();
    log += j.dump() + "\n";
  }
  m.outputs.push_back(
      wd.Write("training_log", "models/" + options.model + ".log.jsonl", log));
  wd.WriteManifest(m);
  return result;
}

namespace {

PerceptronTagger LoadModel(const Workdir &wd, const std::string &model) {
  CheckName("model", model);
  wd.ReadManifest("train-" + model);
  std::istringstream in(wd.Read(ModelPath(model), "train"));
  return PerceptronTagger::Load(in);
}

}  // namespace

void RunPredict(const Workdir &wd, const std::string &model) {
  PerceptronTagger tagger = LoadModel(wd, model);
  std::optional<Matcher> gazetteer;
  Manifest m = NewManifest("predict-" + model);
  m.inputs.push_back(wd.Ref("model", ModelPath(model)));
  m.inputs.push_back(wd.Ref("corpus", artifacts::kCorpus));
  if (tagger.metadata().gazetteer_features) {
    gazetteer = Matcher::Compile(LoadVocabulary(wd), LoadNormalizeOptions(wd));
    tagger.set_gazetteer(&*gazetteer);
    m.inputs.push_back(wd.Ref("vocabulary", artifacts::kVocabulary));
  }
  AnnotatedCorpus predicted = Reannotate(tagger, LoadCorpus(wd));
  m.outputs.push_back(
      wd.Write("predictions", PredictionPath(model), ConllText(predicted)));
  wd.WriteManifest(m);
}

namespace {

AnnotatedCorpus LoadPredictions(const Workdir &wd, const std::string &model) {
  CheckName("model", model);
  wd.ReadManifest("predict-" + model);
  return LoadTagged(wd, PredictionPath(model), "predict");
}

std::optional<std::string> TrainedPlan(const Workdir &wd,
                                       const std::string &model) {
  Manifest train = wd.ReadManifest("train-" + model);
  const std::string &plan = train.options["plan"];
  if (plan.empty()) return std::nullopt;
  return plan;
}

}  // namespace

EvalReport RunEvaluate(const Workdir &wd, const std::string &model) {
  AnnotatedCorpus gold = LoadAnnotated(wd);
  AnnotatedCorpus pred = LoadPredictions(wd, model);
  Manifest m = NewManifest("evaluate-" + model);
  m.inputs.push_back(wd.Ref("annotated", artifacts::kAnnotated));
  m.inputs.push_back(wd.Ref("predictions", PredictionPath(model)));
  if (auto plan = TrainedPlan(wd, model)) {
    FoldSplit split = LoadSplit(wd, *plan);
    gold = SubsetCorpus(gold, split.test);
    pred = SubsetCorpus(pred, split.test);
    m.options["evaluation_set"] = "test:" + *plan;
    m.inputs.push_back(wd.Ref("split", SplitPath(*plan)));
  } else {
    m.options["evaluation_set"] = "corpus";
  }
  EvalReport report = Score(gold, pred);
  m.outputs.push_back(wd.Write("report_json", "reports/eval-" + model + ".jsonl",
                               EvalReportJson(report, model) + "\n"));
  std::ostringstream table;
  WriteEvalTable(report, table);
  m.outputs.push_back(
      wd.Write("report_table", "reports/eval-" + model + ".txt", table.str()));
  wd.WriteManifest(m);
  return report;
}

DiscoveryReport RunDiscover(const Workdir &wd, const std::string &model,
                            const std::optional<fs::path> &judgments_path) {
  PerceptronTagger tagger = LoadModel(wd, model);
  AnnotatedCorpus pred = LoadPredictions(wd, model);
  Vocabulary vocabulary = LoadVocabulary(wd);
  Manifest m = NewManifest("discover-" + model);
  m.inputs.push_back(wd.Ref("predictions", PredictionPath(model)));
  m.inputs.push_back(wd.Ref("vocabulary", artifacts::kVocabulary));
  std::vector<Judgment> judgments;
  if (judgments_path) {
    std::ifstream in(*judgments_path);
    if (!in) throw DataError("cannot open " + judgments_path->string());
    judgments = ReadJudgments(in, judgments_path->string());
    m.inputs.push_back(ExternalRef("judgments", *judgments_path));
  }
  DiscoveryReport report = Discover(
      pred, vocabulary, "epochs=" + std::to_string(tagger.metadata().epochs),
      judgments_path ? &judgments : nullptr, LoadNormalizeOptions(wd));
  m.outputs.push_back(wd.Write("report", "reports/discover-" + model + ".jsonl",
                               DiscoveryReportJson(report) + "\n"));
  wd.WriteManifest(m);
  return report;
}

RefoundReport RunRefound(const Workdir &wd, const std::string &model,
                         std::optional<std::string> plan, bool any_label) {
  if (!plan) plan = TrainedPlan(wd, model);
  if (!plan) {
    throw UsageError("model '" + model +
                     "' was trained on the full corpus; pass --plan");
  }
  AblationPlan ablation = LoadPlan(wd, *plan);
  AnnotatedCorpus pred = LoadPredictions(wd, model);
  Manifest m = NewManifest("refound-" + model);
  m.options["plan"] = *plan;
  m.options["any_label"] = Bool(any_label);
  m.inputs.push_back(wd.Ref("predictions", PredictionPath(model)));
  m.inputs.push_back(wd.Ref("plan", PlanPath(*plan)));
  RefoundReport report =
      Refound(pred, ablation, any_label, LoadNormalizeOptions(wd));
  m.outputs.push_back(wd.Write("report", "reports/refound-" + model + ".jsonl",
                               RefoundReportJson(report) + "\n"));
  wd.WriteManifest(m);
  return report;
}

}  // namespace dsner
