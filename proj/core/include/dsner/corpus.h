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


#ifndef DSNER_CORPUS_H_
#define DSNER_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dsner/labels.h"
#include "dsner/text.h"

namespace dsner {

// Stable sentence identifier; serialized as "<doc_id>:<index>".
struct SentenceId {
  std::string doc_id;
  size_t index = 0;

  std::string ToString() const;
  // Splits on the last ':'; throws DataError when malformed.
  static SentenceId Parse(std::string_view text);

  friend bool operator==(const SentenceId &, const SentenceId &) = default;
  friend auto operator<=>(const SentenceId &, const SentenceId &) = default;
};

struct Sentence {
  SentenceId id;
  std::string text;
  std::vector<Token> tokens;

  // Builds a sentence and tokenizes `text`.
  static Sentence FromText(SentenceId id, std::string text);
  // Builds a sentence from given tokens joined by single spaces.
  static Sentence FromTokens(SentenceId id,
                             const std::vector<std::string> &tokens);

  std::vector<std::string> TokenTexts() const;
};

template <typename S>
struct BasicDocument {
  std::string id;
  std::vector<S> sentences;
};

struct Provenance {
  std::string source_path;
  std::string ingested_at;  // ISO-8601 UTC
};

struct AnnotatedSentence {
  Sentence sentence;
  std::vector<BioTag> tags;
};

// An ordered list of documents. Treated as immutable once built.
template <typename S>
struct BasicCorpus {
  std::vector<BasicDocument<S>> documents;
  Provenance provenance;

  size_t NumSentences() const {
    size_t n = 0;
    for (const auto &doc : documents) n += doc.sentences.size();
    return n;
  }

  template <typename F>
  void ForEachSentence(F &&f) const {
    for (const auto &doc : documents) {
      for (const auto &s : doc.sentences) f(s);
    }
  }
};

using Document = BasicDocument<Sentence>;
using Corpus = BasicCorpus<Sentence>;
using AnnotatedDocument = BasicDocument<AnnotatedSentence>;
using AnnotatedCorpus = BasicCorpus<AnnotatedSentence>;

size_t NumTokens(const Corpus &corpus);

enum class InputFormat { kJsonl, kPlain };

// Reads pre-segmented text. jsonl: one {"doc_id", "sentences": [...]} object
// per line. plain: one sentence per line, blank line between documents; doc
// ids are "doc-<n>" counting from 1. Throws DataError naming the line.
Corpus Ingest(const std::filesystem::path &path, InputFormat format);
Corpus ParseJsonlCorpus(std::istream &in, std::string_view source);
Corpus ParsePlainCorpus(std::istream &in, std::string_view source);

// Writes the jsonl form Ingest reads.
void WriteJsonlCorpus(const Corpus &corpus, std::ostream &out);

// Throws DataError naming the sentence when the tag sequence is not valid
// BIO or its length differs from the token count.
void ValidateBio(const AnnotatedSentence &sentence);
bool IsValidBio(const std::vector<BioTag> &tags);

// CoNLL2003-style output: "token\ttag" per line, blank line after every
// sentence, "-DOCSTART- -X- O O" plus a blank line between documents.
void WriteConll(const AnnotatedCorpus &corpus, std::ostream &out);
std::string ConllString(const AnnotatedCorpus &corpus);
void WriteConllFile(const AnnotatedCorpus &corpus,
                    const std::filesystem::path &path);

// Inverse of WriteConll. Document ids become "doc-<n>" and sentence text is
// the tokens joined by spaces, since the format does not carry either.
AnnotatedCorpus ParseConll(std::istream &in);
AnnotatedCorpus ParseConllFile(const std::filesystem::path &path);

// Pairs tags parsed from CoNLL with an ingested corpus. The document and
// sentence structure plus every token text must agree.
AnnotatedCorpus AttachTags(const Corpus &corpus,
                           const AnnotatedCorpus &tagged);

// Strips the tags.
Corpus PlainCorpus(const AnnotatedCorpus &corpus);

}  // namespace dsner

#endif  // DSNER_CORPUS_H_
