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

#include <algorithm>
#include <charconv>

#include "httplib.h"
#include "json.hpp"

namespace setxpand {
namespace {

using nlohmann::json;

constexpr int kDefaultTopN = 20;
constexpr int kMaxTopN = 10000;
constexpr int kDefaultVocabLimit = 20;
constexpr int kDefaultNeighbors = 10;

HttpResponse Error(int status, const std::string &message,
                   json extra = json::object()) {
  extra["error"] = message;
  return {status, extra.dump()};
}

std::optional<int> ParsePositive(const std::string &text) {
  int value = 0;
  const char *end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || value < 1) return std::nullopt;
  return value;
}

json NeighborList(const EmbeddingModel &model, const TermGroupTable &groups,
                  int id, int k) {
  json out = json::array();
  for (const Neighbor &n : model.Nearest(id, k)) {
    out.push_back({{"term", groups.group(n.id).canonical}, {"cosine", n.cosine}});
  }
  return out;
}

}  // namespace

HttpResponse ExpansionService::Expand(const std::string &body) const {
  json request = json::parse(body, nullptr, false);
  if (request.is_discarded() || !request.is_object()) {
    return Error(400, "body must be a JSON object");
  }
  if (!request.contains("seed") || !request["seed"].is_array() ||
      request["seed"].empty()) {
    return Error(400, "seed must be a non-empty array of strings");
  }
  std::vector<std::string> seeds;
  for (const json &s : request["seed"]) {
    if (!s.is_string()) return Error(400, "seed must be a non-empty array of strings");
    seeds.push_back(s.get<std::string>());
  }
  int top_n = kDefaultTopN;
  if (request.contains("top_n")) {
    const json &t = request["top_n"];
    if (!t.is_number_integer() || t.get<int64_t>() < 1 || t.get<int64_t>() > kMaxTopN) {
      return Error(400, "top_n must be an integer in [1, " +
                            std::to_string(kMaxTopN) + "]");
    }
    top_n = t.get<int>();
  }
  std::string method = "mlp";
  if (request.contains("method")) {
    if (!request["method"].is_string()) return Error(400, "method must be a string");
    method = request["method"].get<std::string>();
  }
  if (!IsKnownMethod(method)) return Error(400, "unknown method: " + method);
  if (!engine_->IsAvailable(method)) {
    return Error(400, "method not available in the loaded models: " + method);
  }
  const SeedSet seed = engine_->Resolve(seeds);
  if (seed.terms.empty()) {
    return Error(422, "no seed term resolves", {{"unresolved", seed.unresolved}});
  }
  const Expansion expansion = engine_->Expand(seed, method, top_n);
  const TermGroupTable &groups = engine_->groups();
  json candidates = json::array();
  for (size_t i = 0; i < expansion.ranked.size(); ++i) {
    const FeatureVector &fv = expansion.features[i];
    candidates.push_back({{"term", groups.group(expansion.ranked[i].id).canonical},
                          {"score", expansion.ranked[i].score},
                          {"features", fv.features}});
  }
  json resolved = json::array();
  for (int id : seed.terms) resolved.push_back(groups.group(id).canonical);
  json response = {{"method", method},
                   {"seed", resolved},
                   {"candidates", candidates},
                   {"unresolved", seed.unresolved}};
  return {200, response.dump()};
}

HttpResponse ExpansionService::Vocab(const std::string &prefix,
                                     const std::optional<std::string> &limit) const {
  int max = kDefaultVocabLimit;
  if (limit) {
    std::optional<int> parsed = ParsePositive(*limit);
    if (!parsed) return Error(400, "limit must be a positive integer");
    max = *parsed;
  }
  const std::string key = NormalizeTerm(prefix);
  const ModelSet models = engine_->models();
  json terms = json::array();
  // Group ids ascend by descending frequency.
  for (const TermGroup &g : engine_->groups().groups()) {
    if (static_cast<int>(terms.size()) >= max) break;
    if (!models.Contains(g.id)) continue;
    bool match = NormalizeTerm(g.canonical).starts_with(key);
    for (size_t i = 0; !match && i < g.members.size(); ++i) {
      match = g.members[i].starts_with(key);
    }
    if (match) terms.push_back({{"term", g.canonical}, {"frequency", g.corpus_frequency}});
  }
  return {200, json{{"prefix", prefix}, {"terms", terms}}.dump()};
}

HttpResponse ExpansionService::Neighbors(const std::string &term,
                                         const std::string &type,
                                         const std::optional<std::string> &k) const {
  int count = kDefaultNeighbors;
  if (k) {
    std::optional<int> parsed = ParsePositive(*k);
    if (!parsed || *parsed > kMaxTopN) return Error(400, "k must be a positive integer");
    count = *parsed;
  }
  std::vector<ContextType> types;
  if (type.empty()) {
    types.assign(kAllContextTypes.begin(), kAllContextTypes.end());
  } else if (std::optional<ContextType> t = ParseContextType(type)) {
    types.push_back(*t);
  } else {
    return Error(400, "unknown context type: " + type);
  }
  const TermGroupTable &groups = engine_->groups();
  std::optional<int> id = groups.Find(term);
  if (!id || !engine_->models().Contains(*id)) {
    return Error(404, "unknown term: " + term);
  }
  json neighbors = json::object();
  for (ContextType t : types) {
    const EmbeddingModel *model = engine_->model(t);
    if (model == nullptr || !model->Contains(*id)) continue;
    neighbors[std::string(ContextTypeName(t))] = NeighborList(*model, groups, *id, count);
  }
  return {200,
          json{{"term", groups.group(*id).canonical}, {"neighbors", neighbors}}.dump()};
}

HttpResponse ExpansionService::Meta() const {
  json models = json::object();
  for (ContextType t : kAllContextTypes) {
    const EmbeddingModel *m = engine_->model(t);
    if (m == nullptr) continue;
    models[std::string(ContextTypeName(t))] = {
        {"terms", m->size()},
        {"dim", m->dim()},
        {"training", m->metadata().empty() ? json::object()
                                           : json::parse(m->metadata())}};
  }
  json methods = json::array();
  for (const std::string &name : AllMethodNames()) {
    if (engine_->IsAvailable(name)) methods.push_back(name);
  }
  json features = json::array();
  for (int f = 0; f < kNumFeatures; ++f) features.push_back(FeatureName(f));
  json response = {{"models", models},
                   {"methods", methods},
                   {"features", features},
                   {"scoring", json::parse(ScoringParamsJson(engine_->params()))},
                   {"term_groups", engine_->groups().size()}};
  return {200, response.dump()};
}

void ExpansionService::Register(httplib::Server *server) const {
  auto send = [](httplib::Response &res, const HttpResponse &r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  auto query = [](const httplib::Request &req,
                  const char *name) -> std::optional<std::string> {
    if (!req.has_param(name)) return std::nullopt;
    return req.get_param_value(name);
  };
  server->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                               {"Access-Control-Allow-Headers", "Content-Type"}});
  server->Options(R"(.*)", [](const httplib::Request &, httplib::Response &res) {
    res.status = 204;
  });
  server->Post("/expand", [this, send](const httplib::Request &req,
                                       httplib::Response &res) {
    send(res, Expand(req.body));
  });
  server->Get("/vocab", [this, send, query](const httplib::Request &req,
                                            httplib::Response &res) {
    send(res, Vocab(query(req, "prefix").value_or(""), query(req, "limit")));
  });
  server->Get(R"(/term/([^/]+)/neighbors)",
              [this, send, query](const httplib::Request &req, httplib::Response &res) {
                send(res, Neighbors(req.matches[1].str(),
                                    query(req, "type").value_or(""), query(req, "k")));
              });
  server->Get("/meta", [this, send](const httplib::Request &, httplib::Response &res) {
    send(res, Meta());
  });
}

bool Serve(const ExpansionEngine &engine, const std::string &host, int port) {
  httplib::Server server;
  ExpansionService service(engine);
  service.Register(&server);
  return server.listen(host, port);
}

}  // namespace setxpand
