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


#include "dsner/protocol.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "dsner/error.h"
#include "dsner/table.h"
#include "json.hpp"

namespace dsner {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string Format(const char *fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string Percent(double fraction) {
  return Format("%.1f%%", 100.0 * fraction);
}

std::string FrequencyModeTitle(AblationMode mode) {
  switch (mode) {
    case AblationMode::kTop10:
      return "remove top 10%";
    case AblationMode::kTop10KeepMft:
      return "remove top 10% + mft*";
    case AblationMode::kMiddle10:
      return "remove middle 10%";
    case AblationMode::kTop10Only:
      return "top 10% only";
    case AblationMode::kRandomFold:
      break;
  }
  return std::string(AblationModeName(mode));
}

std::string FoldTable(const std::vector<FoldRun> &runs) {
  TextTable t({"Fold", "Precision", "Recall", "F1 Score"}, "lrrr");
  double p = 0, r = 0, f = 0;
  for (const FoldRun &run : runs) {
    const SpanCounts &m = run.eval.micro;
    t.AddRow({run.plan.plan_id, FormatRatio(m.Precision()),
              FormatRatio(m.Recall()), FormatRatio(m.F1())});
    p += m.Precision();
    r += m.Recall();
    f += m.F1();
  }
  if (!runs.empty()) {
    const double n = static_cast<double>(runs.size());
    t.AddRule();
    t.AddRow({"Average", FormatRatio(p / n), FormatRatio(r / n), FormatRatio(f / n)});
  }
  return t.ToString();
}

ordered_json Parsed(const std::string &json) { return ordered_json::parse(json); }

}  // namespace

MeanSd ComputeMeanSd(const std::vector<double> &values) {
  MeanSd out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  out.sd = std::sqrt(sq / static_cast<double>(values.size()));
  return out;
}

std::map<std::string, std::string> RenderProtocolBundle(
    const ProtocolResult &result, const std::string &vocabulary_table,
    const std::string &summary) {
  std::map<std::string, std::string> files;
  files["summary.txt"] = summary;
  files["vocabulary.txt"] = vocabulary_table;

  {
    TextTable t({"Epochs", "Precision", "Recall", "F1 Score", "New Entities",
                 "Correct Labeling", "Precision"},
                "rrrrrrr");
    for (const FullRun &run : result.full) {
      const SpanCounts &m = run.eval.micro;
      const bool judged = run.discovery.Precision().has_value();
      t.AddRow({std::to_string(run.epochs), FormatRatio(m.Precision()),
                FormatRatio(m.Recall()), FormatRatio(m.F1()),
                std::to_string(run.discovery.count()),
                judged ? std::to_string(run.discovery.judged_correct) : "N/A",
                FormatRatio(run.discovery.Precision())});
    }
    t.AddNote("Scores against the silver annotation of the full corpus.");
    files["full_data.txt"] = t.ToString();
  }

  {
    TextTable t({"Fold", "Abl.%", "Training set", "Test set", "Dropped", "Mixed"},
                "llrrrr");
    bool complete = true;
    size_t corpus = 0;
    auto add = [&](const std::vector<FoldRun> &runs) {
      for (const FoldRun &run : runs) {
        const FoldSplit &s = run.split;
        corpus = s.corpus_sentences;
        complete = complete && s.train.size() + s.test.size() + s.dropped.size() ==
                                   s.corpus_sentences;
        t.AddRow({run.plan.plan_id,
                  Format("%.0f%%", 100.0 * run.plan.fraction),
                  std::to_string(s.train.size()), std::to_string(s.test.size()),
                  std::to_string(s.dropped.size()), std::to_string(s.mixed)});
      }
    };
    add(result.folds_20);
    if (!result.folds_20.empty() && !result.folds_33.empty()) t.AddRule();
    add(result.folds_33);
    t.AddNote(complete ? "Every plan partitions all " + std::to_string(corpus) +
                             " corpus sentences."
                       : "WARNING: some plan does not partition the corpus.");
    files["fold_sizes.txt"] = t.ToString();
  }

  files["folds_20.txt"] = FoldTable(result.folds_20);
  files["folds_33.txt"] = FoldTable(result.folds_33);

  {
    TextTable t({"Fold", "Retrieved", "Ablated", "Recall"}, "lrrr");
    double retrieved = 0, ablated = 0, recall = 0;
    size_t with_recall = 0;
    for (const FoldRun &run : result.folds_20) {
      const RefoundReport &r = run.refound;
      t.AddRow({run.plan.plan_id, std::to_string(r.retrieved.size()),
                std::to_string(r.ablated.size()), FormatRatio(r.Recall(), 2)});
      retrieved += static_cast<double>(r.retrieved.size());
      ablated += static_cast<double>(r.ablated.size());
      if (r.Recall()) {
        recall += *r.Recall();
        ++with_recall;
      }
    }
    if (!result.folds_20.empty()) {
      const double n = static_cast<double>(result.folds_20.size());
      t.AddRule();
      t.AddRow({"Average", Format("%.1f", retrieved / n), Format("%.1f", ablated / n),
                with_recall ? FormatRatio(recall / with_recall, 2) : "N/A"});
    }
    if (!result.folds_20.empty() && result.folds_20.front().refound.any_label) {
      t.AddNote("Retrieved counts ignore the predicted label.");
    }
    files["refound.txt"] = t.ToString();
  }

  {
    TextTable t({"Training set", "Precision", "Recall", "F1 Score", "Corpus size"},
                "lrrrr");
    for (const FoldRun &run : result.frequency) {
      const SpanCounts &m = run.eval.micro;
      t.AddRow({FrequencyModeTitle(run.plan.mode), FormatRatio(m.Precision()),
                FormatRatio(m.Recall()), FormatRatio(m.F1()),
                Percent(run.split.TrainFraction())});
    }
    t.AddNote("*mft: most frequent term in each label");
    files["frequency_ablation.txt"] = t.ToString();
  }

  {
    TextTable t({"Fold", "Label", "Positive", "Total", "Recall", "Positive",
                 "Total", "Precision"},
                "llrrrrrr");
    bool first = true;
    for (const FoldRun &run : result.folds_20) {
      if (!first) t.AddRule();
      first = false;
      bool lead = true;
      for (Label l : kAllLabels) {
        const SpanCounts &c = run.eval.of(l);
        t.AddRow({lead ? run.plan.plan_id : "", std::string(LabelName(l)),
                  std::to_string(c.correct), std::to_string(c.gold_total),
                  FormatRatio(c.Recall()), std::to_string(c.correct),
                  std::to_string(c.pred_total), FormatRatio(c.Precision())});
        lead = false;
      }
    }
    files["per_label_folds.txt"] = t.ToString();
  }

  {
    TextTable t({"Label", "Recall avg.", "Recall sd", "Precision avg.",
                 "Precision sd"},
                "lrrrr");
    for (Label l : kAllLabels) {
      std::vector<double> recall, precision;
      for (const FoldRun &run : result.folds_20) {
        recall.push_back(run.eval.of(l).Recall());
        precision.push_back(run.eval.of(l).Precision());
      }
      MeanSd r = ComputeMeanSd(recall);
      MeanSd p = ComputeMeanSd(precision);
      t.AddRow({std::string(LabelName(l)), FormatRatio(r.mean, 2),
                FormatRatio(r.sd, 2), FormatRatio(p.mean, 2), FormatRatio(p.sd, 2)});
    }
    t.AddNote("Over the 20% folds; sd is the population standard deviation.");
    files["per_label_average.txt"] = t.ToString();
  }

  std::string jsonl;
  auto emit = [&](ordered_json j) { jsonl += j.dump() + "\n"; };
  for (const FullRun &run : result.full) {
    const std::string name = "full-e" + std::to_string(run.epochs);
    emit({{"kind", "eval"}, {"experiment", "full_data"},
          {"report", Parsed(EvalReportJson(run.eval, name))}});
    emit({{"kind", "discovery"}, {"experiment", "full_data"},
          {"report", Parsed(DiscoveryReportJson(run.discovery))}});
  }
  auto emit_folds = [&](const std::vector<FoldRun> &runs, const char *experiment) {
    for (const FoldRun &run : runs) {
      ordered_json split;
      split["plan_id"] = run.plan.plan_id;
      split["train"] = run.split.train.size();
      split["test"] = run.split.test.size();
      split["dropped"] = run.split.dropped.size();
      split["mixed"] = run.split.mixed;
      split["train_fraction"] = run.split.TrainFraction();
      emit({{"kind", "split"}, {"experiment", experiment}, {"report", split}});
      emit({{"kind", "eval"}, {"experiment", experiment},
            {"report", Parsed(EvalReportJson(run.eval, run.plan.plan_id))}});
      emit({{"kind", "refound"}, {"experiment", experiment},
            {"report", Parsed(RefoundReportJson(run.refound))}});
    }
  };
  emit_folds(result.folds_20, "folds_20");
  emit_folds(result.folds_33, "folds_33");
  emit_folds(result.frequency, "frequency_ablation");
  files["report.jsonl"] = jsonl;
  return files;
}

ProtocolResult RunPaperProtocol(
    const Workdir &wd, const ProtocolInputs &inputs,
    const ProtocolOptions &options,
    const std::function<void(const std::string &)> &log) {
  auto note = [&](const std::string &msg) {
    if (log) log(msg);
  };
  std::ostringstream summary;

  IngestResult ingest = RunIngest(wd, inputs.corpus, inputs.format);
  note("ingest: " + std::to_string(ingest.sentences) + " sentences");
  summary << "documents: " << ingest.documents << "\n"
          << "sentences: " << ingest.sentences << "\n"
          << "tokens: " << ingest.tokens << "\n";

  ReduceOptions reduce;
  reduce.npo = inputs.npo;
  reduce.enm = inputs.enm;
  reduce.roots = inputs.roots;
  reduce.case_sensitive = options.case_sensitive;
  ReduceResult reduced = RunReduceOntology(wd, reduce);
  summary << "NPO concepts retained: " << reduced.npo_retained << " of "
          << reduced.npo_concepts << "\n"
          << "ENM concepts retained: " << reduced.enm_retained << " of "
          << reduced.enm_concepts << "\n";

  ExpandResult expand = RunExpandVariants(wd);
  BuildLexiconResult lexicon = RunBuildLexicon(wd, inputs.ledger);
  summary << "base terms: " << expand.base_terms << "\n"
          << "variant candidates: " << expand.candidates << "\n"
          << "vocabulary: " << lexicon.terms << "\n"
          << "curation warnings: " << lexicon.warnings.size() << "\n";
  note("lexicon: " + std::to_string(lexicon.terms) + " terms");

  AnnotateResult annotated = RunAnnotate(wd);
  summary << "annotated entities: " << annotated.entities << "\n"
          << "seed: " << options.seed << "\n";
  RunStats(wd);

  ProtocolResult result;
  for (int epochs : options.full_epochs) {
    const std::string model = "full-e" + std::to_string(epochs);
    TrainOptions train;
    train.model = model;
    train.config.epochs = epochs;
    train.config.seed = options.seed;
    train.config.gazetteer_features = options.gazetteer_features;
    RunTrain(wd, train);
    RunPredict(wd, model);
    FullRun run;
    run.epochs = epochs;
    run.eval = RunEvaluate(wd, model);
    run.discovery = RunDiscover(wd, model, inputs.judgments);
    note(model + ": F1 " + FormatRatio(run.eval.micro.F1()));
    result.full.push_back(std::move(run));
  }

  auto run_plans = [&](const FoldResult &folds, std::vector<FoldRun> &out,
                       const std::string &prefix) {
    for (size_t i = 0; i < folds.plans.size(); ++i) {
      const AblationPlan &plan = folds.plans[i];
      const std::string model = prefix + plan.plan_id;
      TrainOptions train;
      train.model = model;
      train.plan = plan.plan_id;
      train.config.epochs = options.ablation_epochs;
      train.config.seed = options.seed;
      RunTrain(wd, train);
      RunPredict(wd, model);
      FoldRun run;
      run.plan = plan;
      run.split = folds.splits[i];
      run.eval = RunEvaluate(wd, model);
      run.refound = RunRefound(wd, model, plan.plan_id, options.any_label);
      note(model + ": F1 " + FormatRatio(run.eval.micro.F1()));
      out.push_back(std::move(run));
    }
  };

  FoldOptions fold;
  fold.seed = options.seed;
  fold.mixed = options.mixed;
  fold.k = 5;
  run_plans(RunMakeFolds(wd, fold), result.folds_20, "fold-");
  fold.k = 3;
  run_plans(RunMakeFolds(wd, fold), result.folds_33, "fold-");
  for (AblationMode mode : kFrequencyModes) {
    fold.mode = mode;
    run_plans(RunMakeFolds(wd, fold), result.frequency, "freq-");
  }

  const std::string vocabulary_table =
      wd.Read(artifacts::kStatsTable, "stats");
  for (const auto &[name, data] :
       RenderProtocolBundle(result, vocabulary_table, summary.str())) {
    wd.Write(name, std::string(kProtocolDir) + "/" + name, data);
  }
  return result;
}

}  // namespace dsner
