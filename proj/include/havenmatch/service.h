// Copyright 2026 The HavenMatch Authors.
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

// HTTP API over one live instance: roster edits, logged rounds, audits and
// side-effect-free what-if queries.
//
// Session holds the state and answers requests as (status, JSON body) pairs
// so it can be exercised without a socket. HttpService binds it to routes.

#ifndef HAVENMATCH_SERVICE_H_
#define HAVENMATCH_SERVICE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>

#include "havenmatch/analysis.h"
#include "havenmatch/json_codec.h"
#include "havenmatch/priority.h"
#include "havenmatch/round_log.h"

namespace havenmatch {

struct HttpResponse {
  int status = 200;
  Json body;
};

struct SessionOptions {
  std::filesystem::path log_path;
  // Used when neither the request nor the instance document names a priority.
  PriorityWeights weights;
  std::uint64_t seed = 0;
  std::uint64_t audit_budget = kDefaultOracleBudget;
};

class Session {
 public:
  explicit Session(SessionOptions options);

  // PUT /instance
  HttpResponse PutInstance(const std::string& body);
  // GET /instance
  HttpResponse GetInstance() const;
  // POST /agents
  HttpResponse UpsertAgent(const std::string& body);
  // GET /priority
  HttpResponse GetPriority() const;
  // POST /rounds {mechanism?, priority?, routing?, reported_localities?}
  // Without a priority the document's is used, then the session default.
  HttpResponse RunRound(const std::string& body);
  // GET /rounds
  HttpResponse ListRounds() const;
  // GET /rounds/{id}
  HttpResponse GetRound(std::uint64_t round_id) const;
  // GET /rounds/{id}/audit
  HttpResponse AuditRound(std::uint64_t round_id,
                          std::optional<std::uint64_t> budget) const;
  // POST /whatif/misreport {agent, preferences?, locality?, mechanism?,
  // priority?, routing?}. Mechanism defaults to locality when a locality is
  // given, else sd.
  HttpResponse WhatIfMisreport(const std::string& body) const;
  // POST /whatif/merge {agent, chain, samples?, seed?, routing?,
  // utilities?: [{option, value}]}
  HttpResponse WhatIfMerge(const std::string& body) const;

 private:
  PriorityRanking ResolveRanking(const Json& request) const;

  SessionOptions options_;
  // Writers (instance edits, rounds) take it exclusively; everything else
  // shares it.
  mutable std::shared_mutex mu_;
  std::optional<InstanceDocument> document_;
  RoundLog log_;
};

// host:port, e.g. "127.0.0.1:8080". Throws Error(kParseError).
std::pair<std::string, int> ParseListenAddress(const std::string& address);

class HttpService {
 public:
  explicit HttpService(Session& session);
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  // Returns the bound port (port 0 picks a free one). Throws Error(kIoError).
  int Bind(const std::string& host, int port);
  // Blocks until Stop().
  void Listen();
  void Stop();
  void WaitUntilReady() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace havenmatch

#endif  // HAVENMATCH_SERVICE_H_
