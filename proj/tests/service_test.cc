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

#include <gtest/gtest.h>

#include <fstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "test_util.h"

namespace dsner {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void WriteText(const fs::path &p, const std::string &text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Lexicon workdir with three variant candidates: nanocapsules,
// nanoparticles (Nanoparticle) and dendrimers (Material).
class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const fs::path in = tmp_ / "in";
    fs::create_directories(in);
    WriteText(in / "corpus.jsonl",
              "{\"doc_id\":\"p1\",\"sentences\":[\"The nanocapsule and nanocapsules .\","
              "\"A dendrimer and two dendrimers .\"]}\n"
              "{\"doc_id\":\"p2\",\"sentences\":[\"Nanoparticles and a nanoparticle .\","
              "\"More nanocapsules here .\"]}\n");
    WriteText(in / "npo.csv",
              "key,label,definition,synonyms,parent_key\n"
              "N1,nanoparticle,,,\n"
              "N2,nanocapsule,,,N1\n");
    WriteText(in / "enm.csv",
              "key,label,definition,synonyms,parent_key\n"
              "M1,material,,,\n"
              "M2,dendrimer,,,M1\n");
    WriteText(in / "roots.jsonl",
              "{\"label\":\"Nanoparticle\",\"roots\":[\"N1\"]}\n"
              "{\"label\":\"Material\",\"roots\":[\"M1\"]}\n");
    RunIngest(wd_, in / "corpus.jsonl", InputFormat::kJsonl);
    ReduceOptions reduce{in / "npo.csv", in / "enm.csv", in / "roots.jsonl", false};
    RunReduceOntology(wd_, reduce);
    RunExpandVariants(wd_);
  }

  json Get(CurationService &s, std::map<std::string, std::string> query, int want = 200) {
    ServiceResponse r = s.Handle({"GET", "/api/candidates", std::move(query), ""});
    EXPECT_EQ(r.status, want) << r.body;
    return json::parse(r.body);
  }

  ServiceResponse Post(CurationService &s, const json &body) {
    return s.Handle({"POST", "/api/decisions", {}, body.dump()});
  }

  std::function<std::string()> FixedClock() {
    return [this] {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "2026-03-01T00:00:%02dZ", ticks_++);
      return std::string(buf);
    };
  }

  testing::TempDir tmp_;
  Workdir wd_{tmp_.path() / "wd"};
  int ticks_ = 0;
};

TEST_F(ServiceTest, ListsPendingCandidatesInOrder) {
  CurationService s(wd_, FixedClock());
  json all = Get(s, {});
  EXPECT_EQ(all["total"], 3);
  EXPECT_EQ(all["page"], 1);
  ASSERT_EQ(all["items"].size(), 3u);
  // Label order, then descending frequency.
  EXPECT_EQ(all["items"][0]["surface"], "nanocapsules");
  EXPECT_EQ(all["items"][0]["frequency"], 2);
  EXPECT_EQ(all["items"][1]["surface"], "nanoparticles");
  EXPECT_EQ(all["items"][2]["surface"], "dendrimers");
  EXPECT_EQ(all["items"][2]["label"], "Material");
  EXPECT_EQ(all["items"][2]["parent_term"], "dendrimer");
  for (const json &item : all["items"]) EXPECT_EQ(item["status"], "pending");

  const json &ctx = all["items"][0]["contexts"];
  ASSERT_EQ(ctx.size(), 2u);
  EXPECT_EQ(ctx[0]["sentence_id"], "p1:0");
  const std::string text = ctx[0]["text"];
  EXPECT_EQ(text.substr(ctx[0]["start"], size_t(ctx[0]["end"]) - size_t(ctx[0]["start"])),
            "nanocapsules");
  EXPECT_EQ(ctx[1]["sentence_id"], "p2:1");

  EXPECT_EQ(Get(s, {{"status", "accepted"}})["items"].size(), 0u);
  EXPECT_EQ(Get(s, {{"label", "Material"}})["total"], 1);
  json past = Get(s, {{"page", "2"}});
  EXPECT_EQ(past["total"], 3);
  EXPECT_TRUE(past["items"].empty());
}

TEST_F(ServiceTest, BadQueriesAndMissingArtifacts) {
  CurationService s(wd_, FixedClock());
  Get(s, {{"status", "done"}}, 400);
  Get(s, {{"label", "Gene"}}, 400);
  Get(s, {{"page", "0"}}, 400);
  Get(s, {{"page", "x"}}, 400);
  Get(s, {{"sort", "asc"}}, 400);
  EXPECT_EQ(s.Handle({"GET", "/api/nothing", {}, ""}).status, 404);
  EXPECT_EQ(s.Handle({"DELETE", "/api/stats", {}, ""}).status, 405);

  CurationService empty(Workdir(tmp_ / "empty"), FixedClock());
  Get(empty, {}, 404);
  EXPECT_EQ(Post(empty, {{"surface", "x"}, {"action", "accept"}, {"actor", "a"}}).status,
            404);
  json stats = json::parse(empty.GetStats().body);
  EXPECT_EQ(stats["totals"]["total"], 0);
}

TEST_F(ServiceTest, AcceptUpdatesStatusAndLedger) {
  CurationService s(wd_, FixedClock());
  ServiceResponse r =
      Post(s, {{"surface", "NanoCapsules"}, {"action", "accept"}, {"actor", "expert1"}});
  ASSERT_EQ(r.status, 201) << r.body;
  json d = json::parse(r.body);
  EXPECT_EQ(d["surface"], "nanocapsules");
  EXPECT_EQ(d["timestamp"], "2026-03-01T00:00:00Z");
  json accepted = Get(s, {{"status", "accepted"}});
  ASSERT_EQ(accepted["items"].size(), 1u);
  EXPECT_EQ(accepted["items"][0]["surface"], "nanocapsules");

  std::ifstream in(wd_.Path(artifacts::kLedger));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(DecisionFromJson(line, "ledger").actor, "expert1");

  // A restarted service answers identically.
  CurationService again(wd_, FixedClock());
  EXPECT_EQ(again.Handle({"GET", "/api/candidates", {}, ""}).body,
            s.Handle({"GET", "/api/candidates", {}, ""}).body);
}

TEST_F(ServiceTest, RelabelFlowsIntoTheRebuiltVocabulary) {
  CurationService s(wd_, FixedClock());
  ServiceResponse r = Post(s, {{"surface", "dendrimer"},
                               {"action", "relabel"},
                               {"to_label", "Nanoparticle"},
                               {"actor", "expert"}});
  ASSERT_EQ(r.status, 201) << r.body;
  RunBuildLexicon(wd_, std::nullopt);
  Vocabulary v = LoadVocabulary(wd_);
  ASSERT_NE(v.Find("dendrimer"), nullptr);
  EXPECT_EQ(v.Find("dendrimer")->label, Label::kNanoparticle);
  EXPECT_EQ(v.Find("dendrimers"), nullptr);

  // The variant now follows its parent, so relabeling it there conflicts.
  EXPECT_EQ(Post(s, {{"surface", "dendrimers"},
                     {"action", "relabel"},
                     {"to_label", "Nanoparticle"},
                     {"actor", "expert"}})
                .status,
            409);
  EXPECT_EQ(Post(s, {{"surface", "dendrimer"},
                     {"action", "relabel"},
                     {"to_label", "Nanoparticle"},
                     {"actor", "expert"}})
                .status,
            409);
}

TEST_F(ServiceTest, LaterTimestampWins) {
  CurationService s(wd_, FixedClock());
  ASSERT_EQ(Post(s, {{"surface", "dendrimers"},
                     {"action", "accept"},
                     {"actor", "a"},
                     {"timestamp", "2026-03-02T00:00:00Z"}})
                .status,
            201);
  ASSERT_EQ(Post(s, {{"surface", "dendrimers"},
                     {"action", "reject"},
                     {"actor", "b"},
                     {"timestamp", "2026-03-01T12:00:00Z"}})
                .status,
            201);
  json m = Get(s, {{"label", "Material"}});
  EXPECT_EQ(m["items"][0]["status"], "accepted");
  // A clock behind the ledger cannot produce a decision that would lose.
  EXPECT_EQ(Post(s, {{"surface", "dendrimers"}, {"action", "reject"}, {"actor", "c"}}).status,
            409);
  m = Get(s, {{"label", "Material"}});
  EXPECT_EQ(m["items"][0]["status"], "accepted");
}

TEST_F(ServiceTest, RejectsMalformedDecisions) {
  CurationService s(wd_, FixedClock());
  EXPECT_EQ(Post(s, {{"surface", "unheard of"}, {"action", "accept"}, {"actor", "a"}}).status,
            400);
  EXPECT_EQ(Post(s, {{"surface", "nanocapsules"}, {"action", "keep"}, {"actor", "a"}}).status,
            400);
  EXPECT_EQ(Post(s, {{"surface", "nanocapsules"}, {"action", "relabel"}, {"actor", "a"}}).status,
            400);
  EXPECT_EQ(Post(s, {{"surface", "nanocapsules"},
                     {"action", "relabel"},
                     {"to_label", "Gene"},
                     {"actor", "a"}})
                .status,
            400);
  EXPECT_EQ(Post(s, {{"surface", "nanocapsules"}, {"action", "accept"}}).status, 400);
  EXPECT_EQ(Post(s, {{"surface", "nanocapsules"},
                     {"action", "accept"},
                     {"actor", "a"},
                     {"score", "1"}})
                .status,
            400);
  EXPECT_EQ(s.Handle({"POST", "/api/decisions", {}, "not json"}).status, 400);
  EXPECT_EQ(Post(s, {{"surface", "nanocapsules"},
                     {"action", "relabel"},
                     {"to_label", "Nanoparticle"},
                     {"actor", "a"}})
                .status,
            409);
  EXPECT_FALSE(fs::exists(wd_.Path(artifacts::kLedger)));
}

TEST_F(ServiceTest, StatsReconcile) {
  CurationService s(wd_, FixedClock());
  json fresh = json::parse(s.GetStats().body);
  EXPECT_EQ(fresh["totals"]["pending"], 3);
  EXPECT_EQ(fresh["decided"], 0);
  Post(s, {{"surface", "nanocapsules"}, {"action", "accept"}, {"actor", "a"}});
  Post(s, {{"surface", "nanoparticles"},
           {"action", "relabel"},
           {"to_label", "Material"},
           {"actor", "a"}});
  json st = json::parse(s.GetStats().body);
  EXPECT_EQ(st["totals"]["accepted"], 1);
  EXPECT_EQ(st["totals"]["relabeled"], 1);
  EXPECT_EQ(st["decided"], 2);
  size_t sum = 0;
  for (const json &row : st["labels"]) {
    size_t row_sum = 0;
    for (const char *k : {"pending", "accepted", "rejected", "relabeled"}) {
      row_sum += row[k].get<size_t>();
    }
    EXPECT_EQ(row["total"].get<size_t>(), row_sum);
    sum += row_sum;
  }
  EXPECT_EQ(sum, 3u);
  EXPECT_EQ(st["totals"]["total"], 3);
}

TEST_F(ServiceTest, ServesHttp) {
  CurationService s(wd_, FixedClock());
  const int port = s.BindToAnyPort("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread server([&] { s.ListenAfterBind(); });
  httplib::Client client("127.0.0.1", port);
  auto get = client.Get("/api/candidates?status=pending");
  ASSERT_TRUE(get);
  EXPECT_EQ(get->status, 200);
  EXPECT_EQ(json::parse(get->body)["total"], 3);
  EXPECT_EQ(get->get_header_value("Content-Type"), "application/json");
  auto post = client.Post("/api/decisions",
                          R"({"surface":"nanocapsules","action":"reject","actor":"h"})",
                          "application/json");
  ASSERT_TRUE(post);
  EXPECT_EQ(post->status, 201);
  auto stats = client.Get("/api/stats");
  ASSERT_TRUE(stats);
  EXPECT_EQ(json::parse(stats->body)["totals"]["rejected"], 1);
  s.Stop();
  server.join();
}

}  // namespace
}  // namespace dsner
