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

// The two allocation procedures compared by this library.
//
// SerialDictatorship is the centralized clearinghouse: agents are served in
// priority order and each takes their most preferred option still unassigned.
// Agents who find nothing acceptable left keep their current housing state;
// options nobody picks stay unassigned.
//
// LocalityRestricted is the provider-routing baseline: agents are still served
// in global priority order, but each is first routed to the provider serving
// their (reported) locality and may only pick from that provider's remaining
// inventory.

#ifndef HAVENMATCH_MECHANISM_H_
#define HAVENMATCH_MECHANISM_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "havenmatch/model.h"
#include "havenmatch/priority.h"

namespace havenmatch {

enum class MechanismKind { kSerialDictatorship, kLocalityRestricted };

// "sd" / "locality".
const char* MechanismName(MechanismKind kind);
std::optional<MechanismKind> ParseMechanism(std::string_view name);

struct RoutingPolicy {
  enum class Mode { kByReportedLocality };

  Mode mode = Mode::kByReportedLocality;
  // Sends the agent to this provider regardless of locality.
  std::map<AgentId, ProviderId> overrides;

  friend bool operator==(const RoutingPolicy&, const RoutingPolicy&) = default;
};

// Agent -> locality label they report. Agents without an entry report their
// true locality.
using ReportedLocalities = std::map<AgentId, std::string>;

// A partition of the providers into inventory pools. An agent routed to a
// provider may pick from every option held by any provider of that pool.
using ProviderGroup = std::vector<ProviderId>;
using ProviderGrouping = std::vector<ProviderGroup>;

struct TraceStep {
  AgentId agent;
  // Options the agent could pick from at their turn, in instance order.
  std::vector<OptionId> available;
  Outcome chosen;

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

using RoundTrace = std::vector<TraceStep>;

struct RoundResult {
  Matching matching;
  RoundTrace trace;

  friend bool operator==(const RoundResult&, const RoundResult&) = default;
};

// Throws Error(kInvalidRanking) if the ranking does not match the instance.
RoundResult SerialDictatorship(const Instance& instance,
                               const PriorityRanking& ranking);

// Throws Error(kInvalidRanking) or Error(kInvalidPolicy).
RoundResult LocalityRestricted(const Instance& instance,
                               const PriorityRanking& ranking,
                               const RoutingPolicy& policy,
                               const ReportedLocalities& reported = {});

// Same procedure with providers pooled per `pools`. When `pools` is a single
// group holding every provider, every agent sees the whole inventory and the
// result coincides with SerialDictatorship.
RoundResult LocalityRestricted(const Instance& instance,
                               const PriorityRanking& ranking,
                               const RoutingPolicy& policy,
                               const ReportedLocalities& reported,
                               const ProviderGrouping& pools);

// The provider an agent reporting `locality` is sent to: the policy override
// if any, else the lexicographically smallest provider in that locality.
std::optional<ProviderId> RouteAgent(const Instance& instance,
                                     const AgentId& agent,
                                     const std::string& locality,
                                     const RoutingPolicy& policy);

// Throws Error(kInvalidPolicy) for overrides naming unknown agents or
// providers.
void ValidatePolicy(const RoutingPolicy& policy, const Instance& instance);

// Dispatches on `kind`; policy and reports are ignored by SD.
RoundResult RunMechanism(MechanismKind kind, const Instance& instance,
                         const PriorityRanking& ranking,
                         const RoutingPolicy& policy = {},
                         const ReportedLocalities& reported = {});

}  // namespace havenmatch

#endif  // HAVENMATCH_MECHANISM_H_
