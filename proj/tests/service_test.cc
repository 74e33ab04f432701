// Copyright 2026 The Setxpand Authors.
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

#include "setxpand/service.h"

#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "gtest/gtest.h"
#include "httplib.h"
#include "json.hpp"

namespace setxpand {
namespace {

using nlohmann::json;

// Terms on the unit circle; "Orphan" has a group but no vector.
ExpansionEngine MakeEngine() {
  std::vector<TermGroup> groups = {
      {0, "Apple", {"apple", "apples"}, 50}, {1, "Apricot", {"apricot"}, 40},
      {2, "Banana", {"banana"}, 30},         {3, "Cherry", {"cherry"}, 20},
      {4, "Orphan", {"orphan"}, 10},
  };
  std::vector<float> v;
  for (int i = 0; i < 4; ++i) {
    v.push_back(static_cast<float>(std::cos(0.4 * i)));
    v.push_back(static_cast<float>(std::sin(0.4 * i)));
  }
  ModelArray models;
  models[0].emplace(ContextType::kLin, 2, std::vector<int>{0, 1, 2, 3},
                    std::vector<std::string>{"Apple", "Apricot", "Banana", "Cherry"}, v);
  ScoringParamsByType params;
  for (ScoringParams &p : params) p = {5, 5};
  return ExpansionEngine(TermGroupTable(std::move(groups)), std::move(models), params);
}

class ServiceTest : public ::testing::Test {
 protected:
  ServiceTest() : engine_(MakeEngine()), service_(engine_) {}
  ExpansionEngine engine_;
  ExpansionService service_;
};

TEST_F(ServiceTest, ExpandReturnsRankedCandidates) {
  const HttpResponse r =
      service_.Expand(R"({"seed": ["apple", "nope"], "top_n": 2, "method": "lin-cent"})");
  ASSERT_EQ(r.status, 200) << r.body;
  const json body = json::parse(r.body);
  EXPECT_EQ(body["method"], "lin-cent");
  EXPECT_EQ(body["seed"], json::array({"Apple"}));
  EXPECT_EQ(body["unresolved"], json::array({"nope"}));
  ASSERT_EQ(body["candidates"].size(), 2u);
  EXPECT_EQ(body["candidates"][0]["term"], "Apricot");
  EXPECT_EQ(body["candidates"][1]["term"], "Banana");
  EXPECT_GE(body["candidates"][0]["score"].get<double>(),
            body["candidates"][1]["score"].get<double>());
  EXPECT_EQ(body["candidates"][0]["features"].size(), static_cast<size_t>(kNumFeatures));
}

TEST_F(ServiceTest, ExpandRejectsBadRequests) {
  for (const char *body :
       {"not json", "[]", R"({"seed": []})", R"({"seed": "apple"})", R"({"seed": [1]})",
        R"({"seed": ["apple"], "top_n": 0})", R"({"seed": ["apple"], "top_n": 1.5})",
        R"({"seed": ["apple"], "method": "bogus"})",
        R"({"seed": ["apple"], "method": 3})"}) {
    EXPECT_EQ(service_.Expand(body).status, 400) << body;
  }
  // Known but not loaded.
  EXPECT_EQ(service_.Expand(R"({"seed": ["apple"], "method": "mlp"})").status, 400);
  EXPECT_EQ(service_.Expand(R"({"seed": ["apple"], "method": "sp-cent"})").status, 400);
  const HttpResponse none =
      service_.Expand(R"({"seed": ["orphan", "nope"], "method": "lin-csum"})");
  EXPECT_EQ(none.status, 422);
  EXPECT_EQ(json::parse(none.body)["unresolved"], json::array({"orphan", "nope"}));
}

TEST_F(ServiceTest, VocabMatchesPrefixInFrequencyOrder) {
  const json body = json::parse(service_.Vocab("AP", std::nullopt).body);
  ASSERT_EQ(body["terms"].size(), 2u);
  EXPECT_EQ(body["terms"][0]["term"], "Apple");
  EXPECT_EQ(body["terms"][1]["term"], "Apricot");
  EXPECT_EQ(json::parse(service_.Vocab("ap", "1").body)["terms"].size(), 1u);
  EXPECT_EQ(json::parse(service_.Vocab("", std::nullopt).body)["terms"].size(), 4u);
  EXPECT_TRUE(json::parse(service_.Vocab("orph", std::nullopt).body)["terms"].empty());
  EXPECT_EQ(service_.Vocab("a", "zero").status, 400);
  EXPECT_EQ(service_.Vocab("a", "0").status, 400);
}

TEST_F(ServiceTest, NeighborsPerModel) {
  const HttpResponse r = service_.Neighbors("apple", "", "2");
  ASSERT_EQ(r.status, 200);
  const json body = json::parse(r.body);
  EXPECT_EQ(body["term"], "Apple");
  ASSERT_EQ(body["neighbors"]["lin"].size(), 2u);
  EXPECT_EQ(body["neighbors"]["lin"][0]["term"], "Apricot");
  EXPECT_NEAR(body["neighbors"]["lin"][0]["cosine"].get<double>(), std::cos(0.4), 1e-6);
  EXPECT_FALSE(body["neighbors"].contains("sp"));
  EXPECT_EQ(service_.Neighbors("apple", "lin", std::nullopt).status, 200);
  EXPECT_EQ(service_.Neighbors("orphan", "", std::nullopt).status, 404);
  EXPECT_EQ(service_.Neighbors("zzz", "", std::nullopt).status, 404);
  EXPECT_EQ(service_.Neighbors("apple", "bag", std::nullopt).status, 400);
  EXPECT_EQ(service_.Neighbors("apple", "", "-1").status, 400);
}

TEST_F(ServiceTest, MetaDescribesModelsAndMethods) {
  const json body = json::parse(service_.Meta().body);
  EXPECT_EQ(body["models"]["lin"]["terms"], 4);
  EXPECT_EQ(body["models"]["lin"]["dim"], 2);
  EXPECT_EQ(body["methods"], json::array({"lin-cent", "lin-csum"}));
  EXPECT_EQ(body["features"].size(), static_cast<size_t>(kNumFeatures));
  EXPECT_EQ(body["term_groups"], 5);
}

TEST_F(ServiceTest, HttpRoundTrip) {
  httplib::Server server;
  service_.Register(&server);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  auto expand = client.Post("/expand", R"({"seed": ["apple"], "method": "lin-csum"})",
                            "application/json");
  ASSERT_TRUE(expand);
  EXPECT_EQ(expand->status, 200);
  EXPECT_EQ(expand->get_header_value("Access-Control-Allow-Origin"), "*");
  EXPECT_EQ(json::parse(expand->body)["candidates"].size(), 3u);
  auto vocab = client.Get("/vocab?prefix=ban&limit=5");
  ASSERT_TRUE(vocab);
  EXPECT_EQ(json::parse(vocab->body)["terms"][0]["term"], "Banana");
  auto neighbors = client.Get("/term/Cherry/neighbors?type=lin&k=1");
  ASSERT_TRUE(neighbors);
  EXPECT_EQ(json::parse(neighbors->body)["neighbors"]["lin"][0]["term"], "Banana");
  auto missing = client.Get("/term/zzz/neighbors");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  auto meta = client.Get("/meta");
  ASSERT_TRUE(meta);
  EXPECT_EQ(meta->status, 200);
  auto bad = client.Post("/expand", "{", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  server.stop();
  thread.join();
}

}  // namespace
}  // namespace setxpand
