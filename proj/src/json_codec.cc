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

#include "havenmatch/json_codec.h"

#include <string>

#include "havenmatch/error.h"

namespace havenmatch {
namespace {

template <typename T>
T Optional(const Json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<T>();
}

std::int64_t RequireInteger(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) return 0;
  if (!it->is_number_integer()) {
    throw Error(ErrorCode::kParseError,
                std::string("field '") + key + "' must be an integer");
  }
  return it->get<std::int64_t>();
}

}  // namespace

PriorityRanking BuildRanking(const Instance& instance,
                             const PrioritySpec& spec) {
  if (const auto* explicit_order = std::get_if<ExplicitOrder>(&spec)) {
    return ExplicitPriority(instance, explicit_order->order);
  }
  const auto& weighted = std::get<WeightedPriority>(spec);
  return ComputePriority(instance, weighted.weights, weighted.seed);
}

Json OutcomeToJson(const Outcome& outcome) {
  return outcome ? Json(outcome->str()) : Json(nullptr);
}

Outcome OutcomeFromJson(const Json& j) {
  if (j.is_null()) return kOutside;
  return OptionId(j.get<std::string>());
}

void to_json(Json& j, const PriorityCriteria& c) {
  j = Json{{"family_size", c.family_size},
           {"health_risk", c.health_risk},
           {"wait_time_days", c.wait_time_days}};
}

void from_json(const Json& j, PriorityCriteria& c) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kParseError, "criteria must be an object");
  }
  c.family_size = RequireInteger(j, "family_size");
  c.health_risk = Optional<double>(j, "health_risk", 0.0);
  c.wait_time_days = RequireInteger(j, "wait_time_days");
}

void to_json(Json& j, const Agent& a) {
  j = Json{{"id", a.id},
           {"locality", a.locality},
           {"current_option", OutcomeToJson(a.current_option)},
           {"criteria", a.criteria},
           {"preferences", a.preferences}};
}

void from_json(const Json& j, Agent& a) {
  a.id = j.at("id").get<AgentId>();
  a.locality = Optional<std::string>(j, "locality", "");
  a.current_option =
      j.contains("current_option") ? OutcomeFromJson(j.at("current_option"))
                                   : kOutside;
  a.criteria = Optional<PriorityCriteria>(j, "criteria", PriorityCriteria{});
  a.preferences =
      Optional<std::vector<OptionId>>(j, "preferences", std::vector<OptionId>{});
}

void to_json(Json& j, const HousingOption& o) {
  j = Json{{"id", o.id}, {"provider", o.provider}, {"attributes", o.attributes}};
}

void from_json(const Json& j, HousingOption& o) {
  o.id = j.at("id").get<OptionId>();
  o.provider = j.at("provider").get<ProviderId>();
  o.attributes = Optional<std::map<std::string, std::string>>(
      j, "attributes", std::map<std::string, std::string>{});
}

void to_json(Json& j, const Provider& p) {
  j = Json{{"id", p.id}, {"locality", p.locality}};
}

void from_json(const Json& j, Provider& p) {
  p.id = j.at("id").get<ProviderId>();
  p.locality = j.at("locality").get<std::string>();
}

void to_json(Json& j, const Instance& inst) {
  j = Json{{"agents", inst.agents},
           {"options", inst.options},
           {"providers", inst.providers}};
}

void from_json(const Json& j, Instance& inst) {
  inst.agents = j.at("agents").get<std::vector<Agent>>();
  inst.options = Optional<std::vector<HousingOption>>(
      j, "options", std::vector<HousingOption>{});
  inst.providers =
      Optional<std::vector<Provider>>(j, "providers", std::vector<Provider>{});
}

void to_json(Json& j, const PriorityWeights& w) {
  j = Json{{"family", w.family}, {"health", w.health}, {"wait", w.wait}};
}

void from_json(const Json& j, PriorityWeights& w) {
  w.family = j.at("family").get<double>();
  w.health = j.at("health").get<double>();
  w.wait = j.at("wait").get<double>();
}

void to_json(Json& j, const PrioritySpec& spec) {
  if (const auto* explicit_order = std::get_if<ExplicitOrder>(&spec)) {
    j = Json{{"order", explicit_order->order}};
  } else {
    const auto& weighted = std::get<WeightedPriority>(spec);
    j = Json{{"weights", weighted.weights}, {"seed", weighted.seed}};
  }
}

void from_json(const Json& j, PrioritySpec& spec) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kParseError, "priority must be an object");
  }
  if (j.contains("order")) {
    if (j.contains("weights")) {
      throw Error(ErrorCode::kParseError,
                  "priority takes either 'order' or 'weights', not both");
    }
    spec = ExplicitOrder{j.at("order").get<std::vector<AgentId>>()};
    return;
  }
  if (!j.contains("weights")) {
    throw Error(ErrorCode::kParseError,
                "priority needs an 'order' or 'weights' field");
  }
  WeightedPriority weighted;
  weighted.weights = j.at("weights").get<PriorityWeights>();
  weighted.seed = Optional<std::uint64_t>(j, "seed", 0);
  spec = weighted;
}

void to_json(Json& j, const InstanceDocument& doc) {
  j = Json(doc.instance);
  j["schema_version"] = doc.schema_version;
  if (doc.priority) j["priority"] = *doc.priority;
}

void from_json(const Json& j, InstanceDocument& doc) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kParseError, "instance document must be an object");
  }
  if (!j.contains("schema_version") ||
      !j.at("schema_version").is_number_integer() ||
      j.at("schema_version").get<int>() != kSchemaVersion) {
    throw Error(ErrorCode::kParseError,
                "schema_version must be " + std::to_string(kSchemaVersion));
  }
  doc.schema_version = kSchemaVersion;
  doc.instance = j.get<Instance>();
  doc.priority.reset();
  if (j.contains("priority") && !j.at("priority").is_null()) {
    doc.priority = j.at("priority").get<PrioritySpec>();
  }
}

void to_json(Json& j, const PriorityRanking& r) {
  Json scores = Json::object();
  for (const auto& [id, score] : r.scores) scores[id.str()] = score;
  j = Json{{"order", r.order}, {"scores", scores}};
}

void from_json(const Json& j, PriorityRanking& r) {
  r.order = j.at("order").get<std::vector<AgentId>>();
  r.scores.clear();
  for (const auto& [id, score] : j.at("scores").items()) {
    r.scores[AgentId(id)] = score.get<double>();
  }
}

void to_json(Json& j, const Matching& m) {
  j = Json::object();
  for (const auto& [agent, outcome] : m) j[agent.str()] = OutcomeToJson(outcome);
}

void from_json(const Json& j, Matching& m) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kParseError, "matching must be an object");
  }
  Matching::Map map;
  for (const auto& [agent, outcome] : j.items()) {
    map[AgentId(agent)] = OutcomeFromJson(outcome);
  }
  m = Matching(std::move(map));
}

void to_json(Json& j, const TraceStep& s) {
  j = Json{{"agent", s.agent},
           {"available", s.available},
           {"chosen", OutcomeToJson(s.chosen)}};
}

void from_json(const Json& j, TraceStep& s) {
  s.agent = j.at("agent").get<AgentId>();
  s.available = j.at("available").get<std::vector<OptionId>>();
  s.chosen = OutcomeFromJson(j.at("chosen"));
}

void to_json(Json& j, const RoutingPolicy& p) {
  Json overrides = Json::object();
  for (const auto& [agent, provider] : p.overrides) {
    overrides[agent.str()] = provider.str();
  }
  j = Json{{"mode", "by_reported_locality"}, {"overrides", overrides}};
}

void from_json(const Json& j, RoutingPolicy& p) {
  p = RoutingPolicy{};
  if (j.contains("mode") &&
      j.at("mode").get<std::string>() != "by_reported_locality") {
    throw Error(ErrorCode::kParseError, "unsupported routing mode");
  }
  if (j.contains("overrides")) {
    for (const auto& [agent, provider] : j.at("overrides").items()) {
      p.overrides[AgentId(agent)] = ProviderId(provider.get<std::string>());
    }
  }
}

void to_json(Json& j, const Violation& v) {
  j = Json{{"entity", v.entity},
           {"entity_id", v.entity_id},
           {"field", v.field},
           {"rule", v.rule},
           {"message", v.message}};
}

void to_json(Json& j, const DominanceVerdict& v) {
  j = Json{{"outcome", DominanceOutcomeName(v.outcome)},
           {"improving", v.improving},
           {"worsening", v.worsening}};
}

void to_json(Json& j, const ParetoVerdict& v) {
  j = Json{{"optimal", v.optimal},
           {"witness", v.witness ? Json(*v.witness) : Json(nullptr)},
           {"candidates", v.candidates}};
}

void to_json(Json& j, const Deviation& d) {
  j = Json{{"preferences", d.preferences ? Json(*d.preferences) : Json(nullptr)},
           {"locality", d.locality ? Json(*d.locality) : Json(nullptr)}};
}

void to_json(Json& j, const ManipulationReport& r) {
  j = Json{{"deviator", r.deviator},
           {"deviation", r.deviation},
           {"truthful_outcome", OutcomeToJson(r.truthful_outcome)},
           {"deviant_outcome", OutcomeToJson(r.deviant_outcome)},
           {"profitable", r.profitable}};
}

void to_json(Json& j, const StrategyProofnessResult& r) {
  j = Json{{"deviator", r.deviator},
           {"truthful_outcome", OutcomeToJson(r.truthful_outcome)},
           {"deviations_tried", r.deviations_tried},
           {"exhaustive", r.exhaustive},
           {"profitable", r.profitable}};
}

Json GroupingToJson(const ProviderGrouping& grouping) {
  Json out = Json::array();
  for (const ProviderGroup& group : grouping) out.push_back(group);
  return out;
}

Json ReportedLocalitiesToJson(const ReportedLocalities& reported) {
  Json j = Json::object();
  for (const auto& [agent, locality] : reported) j[agent.str()] = locality;
  return j;
}

ReportedLocalities ReportedLocalitiesFromJson(const Json& j) {
  ReportedLocalities out;
  for (const auto& [agent, locality] : j.items()) {
    out[AgentId(agent)] = locality.get<std::string>();
  }
  return out;
}

ProviderGrouping GroupingFromJson(const Json& j) {
  return j.get<ProviderGrouping>();
}

void to_json(Json& j, const ExpansionRow& r) {
  j = Json{{"grouping", GroupingToJson(r.grouping)},
           {"expected_utility", r.expected_utility}};
}

InstanceDocument ParseInstanceDocument(const Json& j) {
  try {
    return j.get<InstanceDocument>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError,
                std::string("malformed instance document: ") + e.what());
  }
}

InstanceDocument ParseInstanceDocument(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError,
                std::string("instance document is not JSON: ") + e.what());
  }
  return ParseInstanceDocument(j);
}

}  // namespace havenmatch
