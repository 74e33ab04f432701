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

#ifndef SETXPAND_SERVICE_H_
#define SETXPAND_SERVICE_H_

#include <optional>
#include <string>

#include "setxpand/pipeline.h"

namespace httplib {
class Server;
}

namespace setxpand {

struct HttpResponse {
  int status = 200;
  std::string body;  // JSON
};

// Stateless JSON handlers over a read-only engine. Safe to call from many
// threads at once.
class ExpansionService {
 public:
  explicit ExpansionService(const ExpansionEngine &engine) : engine_(&engine) {}

  // Body {"seed": [..], "top_n": N, "method": M}. 400 on malformed input or
  // an unknown method, 422 when no seed resolves.
  HttpResponse Expand(const std::string &body) const;
  // Terms present in some model whose canonical form or a variation starts
  // with the normalized prefix; most frequent first.
  HttpResponse Vocab(const std::string &prefix,
                     const std::optional<std::string> &limit) const;
  // Nearest neighbors in one model, or in all when `type` is empty.
  HttpResponse Neighbors(const std::string &term, const std::string &type,
                         const std::optional<std::string> &k) const;
  HttpResponse Meta() const;

  void Register(httplib::Server *server) const;

 private:
  const ExpansionEngine *engine_;
};

// Blocks serving on host:port. Returns false if the socket cannot be bound.
bool Serve(const ExpansionEngine &engine, const std::string &host, int port);

}  // namespace setxpand

#endif  // SETXPAND_SERVICE_H_
