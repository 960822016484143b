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


#ifndef DSNER_SERVICE_H_
#define DSNER_SERVICE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dsner/lexicon.h"
#include "dsner/pipeline.h"

namespace dsner {

// Review state of a variant candidate under its effective ledger decision.
enum class CandidateStatus { kPending, kAccepted, kRejected, kRelabeled };

std::string_view CandidateStatusName(CandidateStatus status);
std::optional<CandidateStatus> ParseCandidateStatus(std::string_view name);

struct KwicContext {
  std::string sentence_id;
  std::string text;
  size_t start = 0;  // byte offsets of the match in `text`
  size_t end = 0;
};

struct CandidateView {
  std::string surface;
  Label label = Label::kNanoparticle;  // proposed label
  std::string parent_term;
  uint64_t frequency = 0;
  std::vector<KwicContext> contexts;  // first kMaxContexts in corpus order
  CandidateStatus status = CandidateStatus::kPending;
  std::optional<Label> current_label;  // set when relabeled
};

// Transport-free request and response, so handlers can be called directly.
struct ServiceRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ServiceResponse {
  int status = 200;
  std::string body;  // JSON
};

// HTTP API over a workdir's lexicon artifacts and curation ledger. Reads
// take a fresh snapshot of the artifacts, so a restarted service answers
// identically. Decisions are appended to the ledger one at a time.
class CurationService {
 public:
  static constexpr size_t kMaxContexts = 10;
  static constexpr size_t kPageSize = 20;
  static constexpr int kDefaultPort = 7431;

  // `clock` returns the ISO-8601 UTC time stamped on decisions that carry
  // none; the default reads the system clock with millisecond precision.
  explicit CurationService(Workdir workdir,
                           std::function<std::string()> clock = nullptr);
  ~CurationService();

  ServiceResponse Handle(const ServiceRequest &request);

  ServiceResponse GetCandidates(const std::map<std::string, std::string> &query);
  ServiceResponse PostDecision(const std::string &body);
  ServiceResponse GetStats();

  // Candidate views in (label, descending frequency, surface) order.
  // Throws DataError when the lexicon artifacts are missing.
  std::vector<CandidateView> Candidates();

  // Blocks serving HTTP until Stop(). Returns false if the socket could not
  // be bound.
  bool Listen(const std::string &host, int port);
  // Binds an ephemeral port and returns it, or -1. Serve with ListenAfterBind().
  int BindToAnyPort(const std::string &host);
  bool ListenAfterBind();
  void Stop();

 private:
  struct Index;

  std::shared_ptr<const Index> LoadIndex();
  std::vector<CurationDecision> ReadDecisions() const;

  Workdir workdir_;
  std::function<std::string()> clock_;
  std::mutex index_mu_;
  std::shared_ptr<const Index> index_;
  std::mutex ledger_mu_;
  struct Server;
  std::unique_ptr<Server> server_;
};

}  // namespace dsner

#endif  // DSNER_SERVICE_H_
