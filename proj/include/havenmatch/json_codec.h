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

// JSON encodings of the domain types. These are the wire and file formats of
// the clearinghouse: instance documents (schema version 1), matchings, traces
// and analysis reports. Conversions are found by nlohmann::json through ADL.

#ifndef HAVENMATCH_JSON_CODEC_H_
#define HAVENMATCH_JSON_CODEC_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "havenmatch/analysis.h"
#include "havenmatch/mechanism.h"
#include "havenmatch/model.h"
#include "havenmatch/priority.h"
#include "json.hpp"

namespace havenmatch {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct ExplicitOrder {
  std::vector<AgentId> order;
  friend bool operator==(const ExplicitOrder&, const ExplicitOrder&) = default;
};

struct WeightedPriority {
  PriorityWeights weights;
  std::uint64_t seed = 0;
  friend bool operator==(const WeightedPriority&,
                         const WeightedPriority&) = default;
};

// Where the serving queue comes from.
using PrioritySpec = std::variant<ExplicitOrder, WeightedPriority>;

PriorityRanking BuildRanking(const Instance& instance,
                             const PrioritySpec& spec);

struct InstanceDocument {
  int schema_version = kSchemaVersion;
  Instance instance;
  std::optional<PrioritySpec> priority;

  friend bool operator==(const InstanceDocument&,
                         const InstanceDocument&) = default;
};

template <typename Tag>
void to_json(Json& j, const StrongId<Tag>& id) {
  j = id.str();
}

template <typename Tag>
void from_json(const Json& j, StrongId<Tag>& id) {
  id = StrongId<Tag>(j.get<std::string>());
}

// Outcomes encode as the option id string, or null for Outside.
Json OutcomeToJson(const Outcome& outcome);
Outcome OutcomeFromJson(const Json& j);

void to_json(Json& j, const PriorityCriteria& c);
void from_json(const Json& j, PriorityCriteria& c);
void to_json(Json& j, const Agent& a);
void from_json(const Json& j, Agent& a);
void to_json(Json& j, const HousingOption& o);
void from_json(const Json& j, HousingOption& o);
void to_json(Json& j, const Provider& p);
void from_json(const Json& j, Provider& p);
void to_json(Json& j, const Instance& inst);
void from_json(const Json& j, Instance& inst);
void to_json(Json& j, const PriorityWeights& w);
void from_json(const Json& j, PriorityWeights& w);
void to_json(Json& j, const PrioritySpec& spec);
void from_json(const Json& j, PrioritySpec& spec);
void to_json(Json& j, const InstanceDocument& doc);
void from_json(const Json& j, InstanceDocument& doc);

void to_json(Json& j, const PriorityRanking& r);
void from_json(const Json& j, PriorityRanking& r);
void to_json(Json& j, const Matching& m);
void from_json(const Json& j, Matching& m);
void to_json(Json& j, const TraceStep& s);
void from_json(const Json& j, TraceStep& s);
void to_json(Json& j, const RoutingPolicy& p);
void from_json(const Json& j, RoutingPolicy& p);
void to_json(Json& j, const Violation& v);

void to_json(Json& j, const DominanceVerdict& v);
void to_json(Json& j, const ParetoVerdict& v);
void to_json(Json& j, const Deviation& d);
void to_json(Json& j, const ManipulationReport& r);
void to_json(Json& j, const StrategyProofnessResult& r);
void to_json(Json& j, const ExpansionRow& r);

// {"agent id": "locality", ...}
Json ReportedLocalitiesToJson(const ReportedLocalities& reported);
ReportedLocalities ReportedLocalitiesFromJson(const Json& j);

// Provider groupings encode as arrays of arrays of provider ids.
Json GroupingToJson(const ProviderGrouping& grouping);
ProviderGrouping GroupingFromJson(const Json& j);

// Decodes untrusted input; throws Error(kParseError) with a readable message
// for malformed documents (wrong types, missing fields, bad version).
InstanceDocument ParseInstanceDocument(const Json& j);
InstanceDocument ParseInstanceDocument(const std::string& text);

}  // namespace havenmatch

#endif  // HAVENMATCH_JSON_CODEC_H_
