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

// Domain model of the housing clearinghouse: applicants (agents), unit
// capacity housing options, the providers that hold them, and matchings.
//
// An agent's preference list is strict and may be truncated. Options that are
// not on the list are unacceptable to the agent. The outside option (keeping
// the current housing state) ranks below every listed option.

#ifndef HAVENMATCH_MODEL_H_
#define HAVENMATCH_MODEL_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "havenmatch/error.h"

namespace havenmatch {

template <typename Tag>
class StrongId {
 public:
  StrongId() = default;
  explicit StrongId(std::string value) : value_(std::move(value)) {}

  const std::string& str() const { return value_; }
  bool empty() const { return value_.empty(); }

  friend bool operator==(const StrongId&, const StrongId&) = default;
  friend std::strong_ordering operator<=>(const StrongId& a,
                                          const StrongId& b) {
    return a.value_.compare(b.value_) <=> 0;
  }

 private:
  std::string value_;
};

struct AgentTag {};
struct OptionTag {};
struct ProviderTag {};

using AgentId = StrongId<AgentTag>;
using OptionId = StrongId<OptionTag>;
using ProviderId = StrongId<ProviderTag>;

// What an agent ends up with: a housing option, or nullopt for the outside
// option (the agent keeps their current housing state).
using Outcome = std::optional<OptionId>;
inline const Outcome kOutside = std::nullopt;

std::string OutcomeLabel(const Outcome& outcome);

struct PriorityCriteria {
  std::int64_t family_size = 0;
  double health_risk = 0.0;
  std::int64_t wait_time_days = 0;

  friend bool operator==(const PriorityCriteria&,
                         const PriorityCriteria&) = default;
};

struct Agent {
  AgentId id;
  std::string locality;
  Outcome current_option;
  PriorityCriteria criteria;
  // Most preferred first.
  std::vector<OptionId> preferences;

  friend bool operator==(const Agent&, const Agent&) = default;
};

struct HousingOption {
  OptionId id;
  ProviderId provider;
  // Informational only; never used to derive preferences.
  std::map<std::string, std::string> attributes;

  friend bool operator==(const HousingOption&, const HousingOption&) = default;
};

struct Provider {
  ProviderId id;
  std::string locality;

  friend bool operator==(const Provider&, const Provider&) = default;
};

struct Instance {
  std::vector<Agent> agents;
  std::vector<HousingOption> options;
  std::vector<Provider> providers;

  std::size_t num_agents() const { return agents.size(); }
  std::size_t num_options() const { return options.size(); }

  const Agent* FindAgent(const AgentId& id) const;
  const HousingOption* FindOption(const OptionId& id) const;
  const Provider* FindProvider(const ProviderId& id) const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

// One broken rule, reported as data. `entity` is "agent", "option",
// "provider", "instance" or "matching".
struct Violation {
  std::string entity;
  std::string entity_id;
  std::string field;
  std::string rule;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Returns every violated invariant; empty iff the instance is well formed.
std::vector<Violation> ValidateInstance(const Instance& instance);

// Rank 0 is the most preferred option. nullopt means unranked: the outside
// option, or an option missing from the agent's list.
using Rank = std::optional<std::size_t>;

Rank RankOf(const Agent& agent, const Outcome& outcome);

enum class Preference { kStrictlyBetter, kEqual, kStrictlyWorse };

const char* PreferenceName(Preference p);

// How `agent` ranks x against y.
Preference Prefers(const Agent& agent, const Outcome& x, const Outcome& y);

// Total map from agents to outcomes.
class Matching {
 public:
  using Map = std::map<AgentId, Outcome>;

  Matching() = default;
  explicit Matching(Map assignment) : assignment_(std::move(assignment)) {}

  void Assign(const AgentId& agent, Outcome outcome) {
    assignment_[agent] = std::move(outcome);
  }

  // Throws std::out_of_range for an agent not in the matching.
  const Outcome& at(const AgentId& agent) const {
    return assignment_.at(agent);
  }
  bool contains(const AgentId& agent) const {
    return assignment_.contains(agent);
  }
  std::size_t size() const { return assignment_.size(); }
  const Map& assignment() const { return assignment_; }
  Map::const_iterator begin() const { return assignment_.begin(); }
  Map::const_iterator end() const { return assignment_.end(); }

  std::string ToString() const;

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  Map assignment_;
};

// Raised when an instance (or a derived one) breaks its invariants.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& message, std::vector<Violation> violations)
      : Error(ErrorCode::kValidationError, message),
        violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Throws ValidationError listing every violation, if any.
void RequireValidInstance(const Instance& instance);

// Checks totality over the instance's agents, option existence and
// injectivity.
std::vector<Violation> ValidateMatching(const Matching& matching,
                                        const Instance& instance);

}  // namespace havenmatch

template <typename Tag>
struct std::hash<havenmatch::StrongId<Tag>> {
  std::size_t operator()(const havenmatch::StrongId<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};

#endif  // HAVENMATCH_MODEL_H_
