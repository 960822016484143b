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


#include "dsner/corpus.h"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "dsner/error.h"
#include "json.hpp"

namespace dsner {

namespace {

constexpr std::string_view kDocStart = "-DOCSTART- -X- O O";

std::string IngestTimestamp() {
  // SOURCE_DATE_EPOCH pins the timestamp for reproducible artifacts.
  std::time_t t;
  if (const char *epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string DocName(size_t ordinal) { return "doc-" + std::to_string(ordinal); }

}  // namespace

std::string SentenceId::ToString() const {
  return doc_id + ":" + std::to_string(index);
}

SentenceId SentenceId::Parse(std::string_view text) {
  size_t pos = text.rfind(':');
  if (pos == std::string_view::npos || pos + 1 == text.size()) {
    throw DataError("malformed sentence id '" + std::string(text) + "'");
  }
  SentenceId id;
  id.doc_id = std::string(text.substr(0, pos));
  size_t index = 0;
  for (char c : text.substr(pos + 1)) {
    if (c < '0' || c > '9') {
      throw DataError("malformed sentence id '" + std::string(text) + "'");
    }
    index = index * 10 + static_cast<size_t>(c - '0');
  }
  id.index = index;
  return id;
}

Sentence Sentence::FromText(SentenceId id, std::string text) {
  Sentence s;
  s.id = std::move(id);
  s.tokens = Tokenize(text);
  s.text = std::move(text);
  return s;
}

Sentence Sentence::FromTokens(SentenceId id,
                              const std::vector<std::string> &tokens) {
  Sentence s;
  s.id = std::move(id);
  for (const std::string &t : tokens) {
    if (!s.text.empty()) s.text.push_back(' ');
    size_t start = s.text.size();
    s.text += t;
    s.tokens.push_back({t, start, s.text.size()});
  }
  return s;
}

std::vector<std::string> Sentence::TokenTexts() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token &t : tokens) out.push_back(t.text);
  return out;
}

size_t NumTokens(const Corpus &corpus) {
  size_t n = 0;
  corpus.ForEachSentence([&](const Sentence &s) { n += s.tokens.size(); });
  return n;
}

Corpus ParseJsonlCorpus(std::istream &in, std::string_view source) {
  Corpus corpus;
  corpus.provenance.source_path = std::string(source);
  std::set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fail = [&](const std::string &why) {
      throw DataError(std::string(source) + ": line " +
                      std::to_string(line_no) + ": " + why);
    };
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
      fail(std::string("malformed JSON: ") + e.what());
    }
    if (!record.is_object()) fail("record is not an object");
    auto doc_it = record.find("doc_id");
    auto sents_it = record.find("sentences");
    if (doc_it == record.end() || !doc_it->is_string()) {
      fail("missing string field 'doc_id'");
    }
    if (sents_it == record.end() || !sents_it->is_array()) {
      fail("missing array field 'sentences'");
    }
    Document doc;
    doc.id = doc_it->get<std::string>();
    if (!seen.insert(doc.id).second) fail("duplicate doc_id '" + doc.id + "'");
    size_t index = 0;
    for (const auto &s : *sents_it) {
      if (!s.is_string()) fail("sentence entries must be strings");
      doc.sentences.push_back(
          Sentence::FromText({doc.id, index++}, s.get<std::string>()));
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Corpus ParsePlainCorpus(std::istream &in, std::string_view source) {
  Corpus corpus;
  corpus.provenance.source_path = std::string(source);
  std::string line;
  bool open = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      open = false;
      continue;
    }
    if (!open) {
      corpus.documents.push_back({DocName(corpus.documents.size() + 1), {}});
      open = true;
    }
    Document &doc = corpus.documents.back();
    doc.sentences.push_back(
        Sentence::FromText({doc.id, doc.sentences.size()}, line));
  }
  return corpus;
}

Corpus Ingest(const std::filesystem::path &path, InputFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file " + path.string());
  Corpus corpus = format == InputFormat::kJsonl
                      ? ParseJsonlCorpus(in, path.string())
                      : ParsePlainCorpus(in, path.string());
  corpus.provenance.ingested_at = IngestTimestamp();
  return corpus;
}

void WriteJsonlCorpus(const Corpus &corpus, std::ostream &out) {
  for (const Document &doc : corpus.documents) {
    nlohmann::json record;
    record["doc_id"] = doc.id;
    record["sentences"] = nlohmann::json::array();
    for (const Sentence &s : doc.sentences) record["sentences"].push_back(s.text);
    out << record.dump() << '\n';
  }
}

bool IsValidBio(const std::vector<BioTag> &tags) {
  std::optional<BioTag> previous;
  for (const BioTag &tag : tags) {
    if (!tag.CanFollow(previous)) return false;
    previous = tag;
  }
  return true;
}

void ValidateBio(const AnnotatedSentence &sentence) {
  const std::string id = sentence.sentence.id.ToString();
  if (sentence.tags.size() != sentence.sentence.tokens.size()) {
    throw DataError("sentence " + id + ": " +
                    std::to_string(sentence.tags.size()) + " tags for " +
                    std::to_string(sentence.sentence.tokens.size()) +
                    " tokens");
  }
  std::optional<BioTag> previous;
  for (size_t i = 0; i < sentence.tags.size(); ++i) {
    if (!sentence.tags[i].CanFollow(previous)) {
      throw DataError("sentence " + id + ": tag " +
                      sentence.tags[i].ToString() + " at token " +
                      std::to_string(i) + " does not continue an entity");
    }
    previous = sentence.tags[i];
  }
}

void WriteConll(const AnnotatedCorpus &corpus, std::ostream &out) {
  for (size_t d = 0; d < corpus.documents.size(); ++d) {
    if (d > 0) out << kDocStart << "\n\n";
    for (const AnnotatedSentence &s : corpus.documents[d].sentences) {
      ValidateBio(s);
      for (size_t i = 0; i < s.tags.size(); ++i) {
        out << s.sentence.tokens[i].text << '\t' << s.tags[i].ToString()
            << '\n';
      }
      out << '\n';
    }
  }
}

std::string ConllString(const AnnotatedCorpus &corpus) {
  std::ostringstream out;
  WriteConll(corpus, out);
  return out.str();
}

void WriteConllFile(const AnnotatedCorpus &corpus,
                    const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  WriteConll(corpus, out);
}

AnnotatedCorpus ParseConll(std::istream &in) {
  AnnotatedCorpus corpus;
  std::vector<std::string> tokens;
  std::vector<BioTag> tags;
  bool skip_blank = false;
  auto current_doc = [&]() -> AnnotatedDocument & {
    if (corpus.documents.empty()) corpus.documents.push_back({DocName(1), {}});
    return corpus.documents.back();
  };
  auto finish_sentence = [&] {
    AnnotatedDocument &doc = current_doc();
    AnnotatedSentence s;
    s.sentence = Sentence::FromTokens({doc.id, doc.sentences.size()}, tokens);
    s.tags = std::move(tags);
    ValidateBio(s);
    doc.sentences.push_back(std::move(s));
    tokens.clear();
    tags.clear();
  };

  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == kDocStart) {
      if (!tokens.empty()) finish_sentence();
      current_doc();
      corpus.documents.push_back({DocName(corpus.documents.size() + 1), {}});
      skip_blank = true;
      continue;
    }
    if (line.empty()) {
      if (skip_blank) {
        skip_blank = false;
        continue;
      }
      finish_sentence();
      continue;
    }
    skip_blank = false;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw DataError("CoNLL line " + std::to_string(line_no) +
                      ": expected 'token<TAB>tag'");
    }
    auto tag = BioTag::Parse(std::string_view(line).substr(tab + 1));
    if (!tag) {
      throw DataError("CoNLL line " + std::to_string(line_no) + ": invalid tag '" +
                      line.substr(tab + 1) + "'");
    }
    tokens.push_back(line.substr(0, tab));
    tags.push_back(*tag);
  }
  if (!tokens.empty()) finish_sentence();
  return corpus;
}

AnnotatedCorpus ParseConllFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open CoNLL file " + path.string());
  return ParseConll(in);
}

AnnotatedCorpus AttachTags(const Corpus &corpus,
                           const AnnotatedCorpus &tagged) {
  if (corpus.documents.size() != tagged.documents.size()) {
    throw DataError("annotation has " +
                    std::to_string(tagged.documents.size()) +
                    " documents, corpus has " +
                    std::to_string(corpus.documents.size()));
  }
  AnnotatedCorpus out;
  out.provenance = corpus.provenance;
  for (size_t d = 0; d < corpus.documents.size(); ++d) {
    const Document &doc = corpus.documents[d];
    const AnnotatedDocument &tdoc = tagged.documents[d];
    if (doc.sentences.size() != tdoc.sentences.size()) {
      throw DataError("document " + doc.id + ": sentence count mismatch");
    }
    AnnotatedDocument adoc{doc.id, {}};
    for (size_t i = 0; i < doc.sentences.size(); ++i) {
      const Sentence &s = doc.sentences[i];
      const AnnotatedSentence &t = tdoc.sentences[i];
      if (s.TokenTexts() != t.sentence.TokenTexts()) {
        throw DataError("sentence " + s.id.ToString() +
                        ": tokens differ from annotation");
      }
      adoc.sentences.push_back({s, t.tags});
    }
    out.documents.push_back(std::move(adoc));
  }
  return out;
}

Corpus PlainCorpus(const AnnotatedCorpus &corpus) {
  Corpus out;
  out.provenance = corpus.provenance;
  for (const AnnotatedDocument &doc : corpus.documents) {
    Document d{doc.id, {}};
    for (const AnnotatedSentence &s : doc.sentences) {
      d.sentences.push_back(s.sentence);
    }
    out.documents.push_back(std::move(d));
  }
  return out;
}

}  // namespace dsner
