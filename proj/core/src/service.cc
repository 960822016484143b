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


#include "dsner/service.h"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "dsner/annotate.h"
#include "dsner/digest.h"
#include "dsner/error.h"
#include "httplib.h"
#include "json.hpp"

namespace dsner {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::array<const char *, 4> kStatusNames = {"pending", "accepted",
                                                      "rejected", "relabeled"};

std::string SystemClock() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t secs = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      now.time_since_epoch())
                      .count() %
                  1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

ServiceResponse Json(int status, const ordered_json &j) {
  return {status, j.dump()};
}

ServiceResponse Error(int status, const std::string &message) {
  return Json(status, ordered_json{{"error", message}});
}

std::string FileDigest(const Workdir &wd, const char *relative) {
  return wd.Exists(relative) ? Sha256File(wd.Path(relative)) : "";
}

std::optional<size_t> ParsePage(const std::string &text) {
  if (text.empty() || text.size() > 9) return std::nullopt;
  size_t page = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
    page = page * 10 + static_cast<size_t>(c - '0');
  }
  if (page == 0) return std::nullopt;
  return page;
}

ordered_json ViewJson(const CandidateView &v) {
  ordered_json j;
  j["surface"] = v.surface;
  j["label"] = LabelName(v.label);
  j["parent_term"] = v.parent_term;
  j["frequency"] = v.frequency;
  j["status"] = CandidateStatusName(v.status);
  j["current_label"] = v.current_label
                           ? ordered_json(std::string(LabelName(*v.current_label)))
                           : ordered_json(nullptr);
  ordered_json contexts = ordered_json::array();
  for (const KwicContext &c : v.contexts) {
    contexts.push_back({{"sentence_id", c.sentence_id},
                        {"text", c.text},
                        {"start", c.start},
                        {"end", c.end}});
  }
  j["contexts"] = std::move(contexts);
  return j;
}

}  // namespace

std::string_view CandidateStatusName(CandidateStatus status) {
  return kStatusNames[static_cast<size_t>(status)];
}

std::optional<CandidateStatus> ParseCandidateStatus(std::string_view name) {
  for (size_t i = 0; i < kStatusNames.size(); ++i) {
    if (name == kStatusNames[i]) return static_cast<CandidateStatus>(i);
  }
  return std::nullopt;
}

// Artifact snapshot that does not depend on the ledger.
struct CurationService::Index {
  std::string key;
  std::vector<TermEntry> base_terms;
  std::vector<TermEntry> candidates;
  std::map<std::string, uint64_t> frequency;
  std::map<std::string, std::vector<KwicContext>> contexts;
};

struct CurationService::Server {
  httplib::Server http;
};

CurationService::CurationService(Workdir workdir,
                                 std::function<std::string()> clock)
    : workdir_(std::move(workdir)),
      clock_(clock ? std::move(clock) : SystemClock),
      server_(std::make_unique<Server>()) {
  auto adapt = [this](const httplib::Request &req, httplib::Response &res) {
    ServiceRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto &[k, v] : req.params) r.query[k] = v;
    r.body = req.body;
    ServiceResponse out = Handle(r);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  };
  server_->http.Get("/api/candidates", adapt);
  server_->http.Get("/api/stats", adapt);
  server_->http.Post("/api/decisions", adapt);
}

CurationService::~CurationService() { Stop(); }

std::shared_ptr<const CurationService::Index> CurationService::LoadIndex() {
  const Workdir &wd = workdir_;
  for (const char *required : {artifacts::kBaseTerms, artifacts::kCandidates,
                               artifacts::kCandidateFrequency}) {
    wd.Require(required, "expand-variants");
  }
  wd.Require(artifacts::kCorpus, "ingest");
  const std::string key = FileDigest(wd, artifacts::kBaseTerms) +
                          FileDigest(wd, artifacts::kCandidates) +
                          FileDigest(wd, artifacts::kCandidateFrequency) +
                          FileDigest(wd, artifacts::kCorpus);
  {
    std::lock_guard<std::mutex> lock(index_mu_);
    if (index_ && index_->key == key) return index_;
  }

  auto index = std::make_shared<Index>();
  index->key = key;
  auto read_terms = [&](const char *relative) {
    std::istringstream in(wd.Read(relative, "expand-variants"));
    return ReadTermCsv(in, relative);
  };
  index->base_terms = read_terms(artifacts::kBaseTerms);
  index->candidates = read_terms(artifacts::kCandidates);
  {
    std::istringstream in(wd.Read(artifacts::kCandidateFrequency, "expand-variants"));
    for (const auto &[term, n] : ReadTermCounts(in, artifacts::kCandidateFrequency)) {
      index->frequency[term.first] += n;
    }
  }
  if (!index->candidates.empty()) {
    Matcher matcher =
        Matcher::Compile(Vocabulary(index->candidates), LoadNormalizeOptions(wd));
    Corpus corpus = LoadCorpus(wd);
    corpus.ForEachSentence([&](const Sentence &s) {
      for (const Match &m : matcher.FindAll(s.tokens)) {
        auto &list = index->contexts[matcher.pattern(m.pattern).surface];
        if (list.size() >= kMaxContexts) continue;
        list.push_back({s.id.ToString(), s.text, s.tokens[m.start].start,
                        s.tokens[m.end - 1].end});
      }
    });
  }

  std::lock_guard<std::mutex> lock(index_mu_);
  index_ = index;
  return index_;
}

std::vector<CurationDecision> CurationService::ReadDecisions() const {
  const fs::path path = workdir_.Path(artifacts::kLedger);
  if (!fs::exists(path)) return {};
  return ReadLedgerFile(path);
}

std::vector<CandidateView> CurationService::Candidates() {
  std::shared_ptr<const Index> index = LoadIndex();
  std::map<std::string, CurationDecision> decisions;
  {
    std::lock_guard<std::mutex> lock(ledger_mu_);
    decisions = EffectiveDecisions(ReadDecisions());
  }
  auto relabel_of = [&](const std::string &surface) -> std::optional<Label> {
    auto it = decisions.find(surface);
    if (it == decisions.end() || it->second.action != CurationAction::kRelabel) {
      return std::nullopt;
    }
    return it->second.to_label;
  };

  std::vector<CandidateView> views;
  views.reserve(index->candidates.size());
  for (const TermEntry &c : index->candidates) {
    CandidateView v;
    v.surface = c.surface;
    v.label = c.label;
    v.parent_term = c.parent_term;
    auto f = index->frequency.find(c.surface);
    v.frequency = f == index->frequency.end() ? 0 : f->second;
    auto ctx = index->contexts.find(c.surface);
    if (ctx != index->contexts.end()) v.contexts = ctx->second;
    auto d = decisions.find(c.surface);
    if (d != decisions.end()) {
      switch (d->second.action) {
        case CurationAction::kAccept:
          v.status = CandidateStatus::kAccepted;
          break;
        case CurationAction::kReject:
          v.status = CandidateStatus::kRejected;
          break;
        case CurationAction::kRelabel:
          v.status = CandidateStatus::kRelabeled;
          v.current_label = d->second.to_label;
          break;
      }
    }
    if (!v.current_label) {
      if (auto parent = relabel_of(c.parent_term); parent && *parent != c.label) {
        v.current_label = parent;
      }
    }
    views.push_back(std::move(v));
  }
  std::sort(views.begin(), views.end(),
            [](const CandidateView &a, const CandidateView &b) {
              if (a.label != b.label) return a.label < b.label;
              if (a.frequency != b.frequency) return a.frequency > b.frequency;
              return a.surface < b.surface;
            });
  return views;
}

ServiceResponse CurationService::Handle(const ServiceRequest &request) {
  try {
    if (request.path == "/api/candidates") {
      if (request.method != "GET") return Error(405, "method not allowed");
      return GetCandidates(request.query);
    }
    if (request.path == "/api/decisions") {
      if (request.method != "POST") return Error(405, "method not allowed");
      return PostDecision(request.body);
    }
    if (request.path == "/api/stats") {
      if (request.method != "GET") return Error(405, "method not allowed");
      return GetStats();
    }
    return Error(404, "no route for " + request.path);
  } catch (const DataError &e) {
    return Error(500, e.what());
  }
}

ServiceResponse CurationService::GetCandidates(
    const std::map<std::string, std::string> &query) {
  std::optional<CandidateStatus> status;
  std::optional<Label> label;
  size_t page = 1;
  for (const auto &[key, value] : query) {
    if (key == "status") {
      if (value.empty()) continue;
      status = ParseCandidateStatus(value);
      if (!status) return Error(400, "unknown status '" + value + "'");
    } else if (key == "label") {
      if (value.empty()) continue;
      label = ParseLabel(value);
      if (!label) return Error(400, "unknown label '" + value + "'");
    } else if (key == "page") {
      auto p = ParsePage(value);
      if (!p) return Error(400, "page must be a positive integer");
      page = *p;
    } else {
      return Error(400, "unknown query parameter '" + key + "'");
    }
  }

  std::vector<CandidateView> views;
  try {
    views = Candidates();
  } catch (const DataError &e) {
    return Error(404, e.what());
  }
  std::vector<const CandidateView *> selected;
  for (const CandidateView &v : views) {
    if (status && v.status != *status) continue;
    if (label && v.label != *label) continue;
    selected.push_back(&v);
  }
  ordered_json items = ordered_json::array();
  const size_t begin = (page - 1) * kPageSize;
  for (size_t i = begin; i < selected.size() && i < begin + kPageSize; ++i) {
    items.push_back(ViewJson(*selected[i]));
  }
  ordered_json out;
  out["total"] = selected.size();
  out["page"] = page;
  out["page_size"] = kPageSize;
  out["items"] = std::move(items);
  return Json(200, out);
}

ServiceResponse CurationService::PostDecision(const std::string &body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error &) {
    return Error(400, "body is not JSON");
  }
  if (!j.is_object()) return Error(400, "body must be an object");
  auto str = [&](const char *field) -> std::optional<std::string> {
    if (!j.contains(field) || j[field].is_null()) return std::nullopt;
    if (!j[field].is_string()) return std::string();
    return j[field].get<std::string>();
  };
  for (const auto &[key, value] : j.items()) {
    if (key != "surface" && key != "action" && key != "to_label" &&
        key != "actor" && key != "note" && key != "timestamp") {
      return Error(400, "unknown field '" + key + "'");
    }
    if (!value.is_string() && !value.is_null()) {
      return Error(400, "field '" + key + "' must be a string");
    }
  }

  CurationDecision d;
  std::optional<std::string> surface = str("surface");
  if (!surface || surface->empty()) return Error(400, "missing surface");
  d.surface = Normalize(*surface);
  std::optional<std::string> action = str("action");
  if (!action) return Error(400, "missing action");
  std::optional<CurationAction> parsed = ParseCurationAction(*action);
  if (!parsed) return Error(400, "unknown action '" + *action + "'");
  d.action = *parsed;
  std::optional<std::string> to_label = str("to_label");
  if (d.action == CurationAction::kRelabel) {
    if (!to_label) return Error(400, "relabel requires to_label");
    d.to_label = ParseLabel(*to_label);
    if (!d.to_label) return Error(400, "unknown label '" + *to_label + "'");
  } else if (to_label) {
    return Error(400, "to_label is only valid with relabel");
  }
  std::optional<std::string> actor = str("actor");
  if (!actor || actor->empty()) return Error(400, "missing actor");
  d.actor = *actor;
  d.note = str("note");

  std::shared_ptr<const Index> index;
  try {
    index = LoadIndex();
  } catch (const DataError &e) {
    return Error(404, e.what());
  }
  std::set<Label> base_labels;
  for (const TermEntry &e : index->base_terms) {
    if (e.surface == d.surface) base_labels.insert(e.label);
  }
  const TermEntry *candidate = nullptr;
  for (const TermEntry &c : index->candidates) {
    if (c.surface == d.surface) candidate = &c;
  }
  if (base_labels.empty() && !candidate) {
    return Error(400, "unknown surface '" + d.surface + "'");
  }

  std::lock_guard<std::mutex> lock(ledger_mu_);
  std::vector<CurationDecision> ledger = ReadDecisions();
  std::map<std::string, CurationDecision> effective = EffectiveDecisions(ledger);

  if (d.action == CurationAction::kRelabel) {
    std::optional<Label> current;
    auto it = effective.find(d.surface);
    if (it != effective.end() && it->second.action == CurationAction::kRelabel) {
      current = it->second.to_label;
    } else if (candidate) {
      auto parent = effective.find(candidate->parent_term);
      current = parent != effective.end() &&
                        parent->second.action == CurationAction::kRelabel
                    ? parent->second.to_label
                    : std::optional<Label>(candidate->label);
    } else if (base_labels.size() == 1) {
      current = *base_labels.begin();
    }
    if (current && *current == *d.to_label) {
      return Error(409, "'" + d.surface + "' is already labeled " +
                            std::string(LabelName(*current)));
    }
  }

  if (std::optional<std::string> ts = str("timestamp")) {
    if (ts->empty()) return Error(400, "empty timestamp");
    d.timestamp = *ts;
  } else {
    std::string latest;
    for (const CurationDecision &prev : ledger) {
      latest = std::max(latest, prev.timestamp);
    }
    d.timestamp = clock_();
    for (int tries = 0; tries < 5 && d.timestamp <= latest; ++tries) {
      std::this_thread::sleep_for(std::chrono::milliseconds(1));
      d.timestamp = clock_();
    }
    if (d.timestamp <= latest) {
      return Error(409, "clock " + d.timestamp +
                            " is not past the latest ledger decision " + latest);
    }
  }

  ledger.push_back(d);
  try {
    EffectiveDecisions(ledger);
  } catch (const DataError &e) {
    return Error(409, e.what());
  }

  // Append-only: the bytes before the new line must stay as they were.
  const fs::path path = workdir_.Path(artifacts::kLedger);
  fs::create_directories(path.parent_path());
  std::string before = fs::exists(path) ? ReadFile(path) : "";
  std::string line = DecisionToJsonLine(d) + "\n";
  if (!before.empty() && before.back() != '\n') line = "\n" + line;
  const std::string before_digest = Sha256Hex(before);
  {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    out << line;
    out.flush();
    if (!out) return Error(500, "cannot append to " + path.string());
  }
  const std::string after = ReadFile(path);
  if (after.size() != before.size() + line.size() ||
      Sha256Hex(std::string_view(after).substr(0, before.size())) != before_digest) {
    return Error(500, "ledger changed during append");
  }
  return Json(201, ordered_json::parse(DecisionToJsonLine(d)));
}

ServiceResponse CurationService::GetStats() {
  std::vector<CandidateView> views;
  try {
    views = Candidates();
  } catch (const DataError &) {
    // No artifacts yet: nothing to review.
  }
  std::array<std::array<size_t, kStatusNames.size()>, kNumLabels> counts{};
  for (const CandidateView &v : views) {
    ++counts[static_cast<size_t>(v.label)][static_cast<size_t>(v.status)];
  }
  std::array<size_t, kStatusNames.size()> totals{};
  ordered_json labels = ordered_json::array();
  for (Label l : kAllLabels) {
    ordered_json row;
    row["label"] = LabelName(l);
    size_t sum = 0;
    for (size_t s = 0; s < kStatusNames.size(); ++s) {
      const size_t n = counts[static_cast<size_t>(l)][s];
      row[kStatusNames[s]] = n;
      totals[s] += n;
      sum += n;
    }
    row["total"] = sum;
    labels.push_back(std::move(row));
  }
  ordered_json total;
  for (size_t s = 0; s < kStatusNames.size(); ++s) total[kStatusNames[s]] = totals[s];
  total["total"] = views.size();
  const size_t decided = views.size() - totals[0];
  ordered_json out;
  out["labels"] = std::move(labels);
  out["totals"] = std::move(total);
  out["decided"] = decided;
  out["progress"] =
      views.empty() ? 0.0 : static_cast<double>(decided) / views.size();
  return Json(200, out);
}

bool CurationService::Listen(const std::string &host, int port) {
  return server_->http.listen(host, port);
}

int CurationService::BindToAnyPort(const std::string &host) {
  return server_->http.bind_to_any_port(host);
}

bool CurationService::ListenAfterBind() { return server_->http.listen_after_bind(); }

void CurationService::Stop() {
  if (server_) server_->http.stop();
}

}  // namespace dsner
