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

#include "havenmatch/model.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace havenmatch {

std::string OutcomeLabel(const Outcome& outcome) {
  return outcome ? outcome->str() : std::string("Outside");
}

const Agent* Instance::FindAgent(const AgentId& id) const {
  auto it = std::find_if(agents.begin(), agents.end(),
                         [&](const Agent& a) { return a.id == id; });
  return it == agents.end() ? nullptr : &*it;
}

const HousingOption* Instance::FindOption(const OptionId& id) const {
  auto it = std::find_if(options.begin(), options.end(),
                         [&](const HousingOption& o) { return o.id == id; });
  return it == options.end() ? nullptr : &*it;
}

const Provider* Instance::FindProvider(const ProviderId& id) const {
  auto it = std::find_if(providers.begin(), providers.end(),
                         [&](const Provider& p) { return p.id == id; });
  return it == providers.end() ? nullptr : &*it;
}

namespace {

Violation MakeViolation(std::string entity, std::string entity_id,
                        std::string field, std::string rule,
                        std::string message) {
  return Violation{std::move(entity), std::move(entity_id), std::move(field),
                   std::move(rule), std::move(message)};
}

}  // namespace

std::vector<Violation> ValidateInstance(const Instance& instance) {
  std::vector<Violation> out;

  if (instance.agents.empty()) {
    out.push_back(MakeViolation("instance", "", "agents", "no-agents",
                                "an instance needs at least one agent"));
  }

  std::set<ProviderId> provider_ids;
  for (const Provider& p : instance.providers) {
    if (p.id.empty()) {
      out.push_back(MakeViolation("provider", "", "id", "empty-id",
                                  "provider id must be nonempty"));
    } else if (!provider_ids.insert(p.id).second) {
      out.push_back(MakeViolation("provider", p.id.str(), "id", "duplicate-id",
                                  "provider id '" + p.id.str() +
                                      "' appears more than once"));
    }
    if (p.locality.empty()) {
      out.push_back(MakeViolation("provider", p.id.str(), "locality",
                                  "empty-locality",
                                  "provider locality must be nonempty"));
    }
  }

  std::set<OptionId> option_ids;
  for (const HousingOption& o : instance.options) {
    if (o.id.empty()) {
      out.push_back(MakeViolation("option", "", "id", "empty-id",
                                  "option id must be nonempty"));
    } else if (!option_ids.insert(o.id).second) {
      out.push_back(MakeViolation("option", o.id.str(), "id", "duplicate-id",
                                  "option id '" + o.id.str() +
                                      "' appears more than once"));
    }
    // '|' separates preferences in the CSV roster format.
    if (o.id.str().find('|') != std::string::npos) {
      out.push_back(MakeViolation("option", o.id.str(), "id",
                                  "reserved-character",
                                  "option ids may not contain '|'"));
    }
    if (!provider_ids.contains(o.provider)) {
      out.push_back(MakeViolation("option", o.id.str(), "provider",
                                  "unknown-provider",
                                  "option '" + o.id.str() +
                                      "' references unknown provider '" +
                                      o.provider.str() + "'"));
    }
  }

  std::set<AgentId> agent_ids;
  for (const Agent& a : instance.agents) {
    const std::string& aid = a.id.str();
    if (a.id.empty()) {
      out.push_back(MakeViolation("agent", "", "id", "empty-id",
                                  "agent id must be nonempty"));
    } else if (!agent_ids.insert(a.id).second) {
      out.push_back(MakeViolation("agent", aid, "id", "duplicate-id",
                                  "agent id '" + aid +
                                      "' appears more than once"));
    }
    if (a.current_option && !option_ids.contains(*a.current_option)) {
      out.push_back(MakeViolation("agent", aid, "current_option",
                                  "unknown-option",
                                  "agent '" + aid +
                                      "' has unknown current option '" +
                                      a.current_option->str() + "'"));
    }
    const PriorityCriteria& c = a.criteria;
    if (c.family_size < 0 || c.wait_time_days < 0 ||
        !std::isfinite(c.health_risk) || c.health_risk < 0.0) {
      out.push_back(MakeViolation("agent", aid, "criteria", "invalid-criteria",
                                  "agent '" + aid +
                                      "' has negative or non-finite criteria"));
    }
    std::set<OptionId> seen;
    for (const OptionId& opt : a.preferences) {
      if (!option_ids.contains(opt)) {
        out.push_back(MakeViolation("agent", aid, "preferences",
                                    "unknown-option",
                                    "agent '" + aid +
                                        "' lists unknown option '" +
                                        opt.str() + "'"));
      } else if (!seen.insert(opt).second) {
        out.push_back(MakeViolation("agent", aid, "preferences",
                                    "duplicate-preference",
                                    "agent '" + aid + "' lists option '" +
                                        opt.str() + "' more than once"));
      }
    }
  }
  return out;
}

void RequireValidInstance(const Instance& instance) {
  std::vector<Violation> violations = ValidateInstance(instance);
  if (violations.empty()) return;
  std::string message = violations.front().message;
  if (violations.size() > 1) {
    message += " (and " + std::to_string(violations.size() - 1) +
               " more violation" + (violations.size() > 2 ? "s" : "") + ")";
  }
  throw ValidationError(message, std::move(violations));
}

Rank RankOf(const Agent& agent, const Outcome& outcome) {
  if (!outcome) return std::nullopt;
  auto it = std::find(agent.preferences.begin(), agent.preferences.end(),
                      *outcome);
  if (it == agent.preferences.end()) return std::nullopt;
  return static_cast<std::size_t>(it - agent.preferences.begin());
}

const char* PreferenceName(Preference p) {
  switch (p) {
    case Preference::kStrictlyBetter: return "StrictlyBetter";
    case Preference::kEqual: return "Equal";
    case Preference::kStrictlyWorse: return "StrictlyWorse";
  }
  return "?";
}

Preference Prefers(const Agent& agent, const Outcome& x, const Outcome& y) {
  const Rank rx = RankOf(agent, x);
  const Rank ry = RankOf(agent, y);
  if (rx == ry) return Preference::kEqual;
  if (!rx) return Preference::kStrictlyWorse;
  if (!ry) return Preference::kStrictlyBetter;
  return *rx < *ry ? Preference::kStrictlyBetter : Preference::kStrictlyWorse;
}

std::string Matching::ToString() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [agent, outcome] : assignment_) {
    if (!first) os << ", ";
    first = false;
    os << agent.str() << ':' << OutcomeLabel(outcome);
  }
  os << '}';
  return os.str();
}

std::vector<Violation> ValidateMatching(const Matching& matching,
                                        const Instance& instance) {
  std::vector<Violation> out;
  for (const Agent& a : instance.agents) {
    if (!matching.contains(a.id)) {
      out.push_back(MakeViolation("matching", a.id.str(), "assignment",
                                  "missing-agent",
                                  "agent '" + a.id.str() + "' is unassigned"));
    }
  }
  std::set<OptionId> used;
  for (const auto& [agent, outcome] : matching) {
    if (instance.FindAgent(agent) == nullptr) {
      out.push_back(MakeViolation("matching", agent.str(), "assignment",
                                  "unknown-agent",
                                  "agent '" + agent.str() +
                                      "' is not in the instance"));
    }
    if (!outcome) continue;
    if (instance.FindOption(*outcome) == nullptr) {
      out.push_back(MakeViolation("matching", agent.str(), "assignment",
                                  "unknown-option",
                                  "option '" + outcome->str() +
                                      "' is not in the instance"));
    } else if (!used.insert(*outcome).second) {
      out.push_back(MakeViolation("matching", agent.str(), "assignment",
                                  "option-reused",
                                  "option '" + outcome->str() +
                                      "' is assigned to more than one agent"));
    }
  }
  return out;
}

}  // namespace havenmatch
