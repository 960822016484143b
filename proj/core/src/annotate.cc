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


#include "dsner/annotate.h"

#include <algorithm>
#include <istream>
#include <ostream>

#include "dsner/csv.h"
#include "dsner/error.h"

namespace dsner {

Matcher Matcher::Compile(const Vocabulary &vocabulary,
                         const NormalizeOptions &options) {
  Matcher m;
  m.options_ = options;
  for (const TermEntry &e : vocabulary.entries()) {
    std::vector<std::string> words = TermWords(e.surface, options);
    if (words.empty()) {
      throw DataError("term '" + e.surface + "' normalizes to an empty pattern");
    }
    int id = m.automaton_.Add(words);
    if (static_cast<size_t>(id) < m.patterns_.size()) {
      const Pattern &existing = m.patterns_[id];
      if (existing.label != e.label) {
        throw DataError("terms '" + existing.surface + "' (" +
                        std::string(LabelName(existing.label)) + ") and '" +
                        e.surface + "' (" + std::string(LabelName(e.label)) +
                        ") compile to the same pattern");
      }
      continue;
    }
    m.patterns_.push_back({e.surface, e.label, words.size()});
  }
  m.automaton_.Build();
  return m;
}

std::vector<Match> Matcher::FindAll(const std::vector<Token> &tokens) const {
  std::vector<Match> out;
  for (const auto &hit : automaton_.FindAll(tokens, options_)) {
    out.push_back({hit.token_begin, hit.token_end, hit.pattern});
  }
  return out;
}

std::vector<Match> ResolveOverlaps(std::vector<Match> matches) {
  std::sort(matches.begin(), matches.end(), [](const Match &a, const Match &b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end > b.end;
    return a.pattern < b.pattern;
  });
  std::vector<Match> selected;
  size_t covered = 0;
  for (const Match &m : matches) {
    if (!selected.empty() && m.start < covered) continue;
    selected.push_back(m);
    covered = m.end;
  }
  return selected;
}

std::vector<Match> Matcher::FindDisjoint(const std::vector<Token> &tokens) const {
  return ResolveOverlaps(FindAll(tokens));
}

AnnotatedSentence Matcher::Annotate(const Sentence &sentence) const {
  AnnotatedSentence out;
  out.sentence = sentence;
  out.tags.assign(sentence.tokens.size(), BioTag::Outside());
  for (const Match &m : FindDisjoint(sentence.tokens)) {
    Label label = patterns_[m.pattern].label;
    out.tags[m.start] = BioTag::Begin(label);
    for (size_t i = m.start + 1; i < m.end; ++i) {
      out.tags[i] = BioTag::Inside(label);
    }
  }
  return out;
}

AnnotatedSentence AnnotateSentence(const Matcher &matcher,
                                   const Sentence &sentence) {
  return matcher.Annotate(sentence);
}

AnnotationResult AnnotateCorpus(const Matcher &matcher, const Corpus &corpus) {
  AnnotationResult result;
  result.corpus.provenance = corpus.provenance;
  std::vector<uint64_t> counts(matcher.num_patterns(), 0);
  for (const Document &doc : corpus.documents) {
    AnnotatedDocument adoc{doc.id, {}};
    adoc.sentences.reserve(doc.sentences.size());
    for (const Sentence &s : doc.sentences) {
      AnnotatedSentence a;
      a.sentence = s;
      a.tags.assign(s.tokens.size(), BioTag::Outside());
      for (const Match &m : matcher.FindDisjoint(s.tokens)) {
        Label label = matcher.pattern(m.pattern).label;
        a.tags[m.start] = BioTag::Begin(label);
        for (size_t i = m.start + 1; i < m.end; ++i) {
          a.tags[i] = BioTag::Inside(label);
        }
        ++counts[m.pattern];
      }
      adoc.sentences.push_back(std::move(a));
    }
    result.corpus.documents.push_back(std::move(adoc));
  }
  for (size_t p = 0; p < counts.size(); ++p) {
    const auto &pat = matcher.pattern(static_cast<int>(p));
    result.counts[{pat.surface, pat.label}] = counts[p];
  }
  return result;
}

void WriteTermCounts(const TermCounts &counts, std::ostream &out) {
  WriteCsvRow(out, {"surface", "label", "count"});
  for (const auto &[key, count] : counts) {
    WriteCsvRow(out, {key.first, std::string(LabelName(key.second)),
                      std::to_string(count)});
  }
}

TermCounts ReadTermCounts(std::istream &in, std::string_view name) {
  TermCounts counts;
  for (auto &row : ReadCsvWithHeader(in, {"surface", "label", "count"}, name)) {
    Label label = ParseLabelOrThrow(row[1], name);
    try {
      counts[{row[0], label}] = std::stoull(row[2]);
    } catch (const std::exception &) {
      throw DataError(std::string(name) + ": bad count for '" + row[0] + "'");
    }
  }
  return counts;
}

}  // namespace dsner
