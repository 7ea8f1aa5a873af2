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

#include "havenmatch/priority.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <tuple>

#include "havenmatch/error.h"

namespace havenmatch {
namespace {

std::uint64_t Fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// mt19937_64's output sequence is fixed by the standard, so the key is
// reproducible across toolchains.
std::uint64_t TieBreakKey(const AgentId& id, std::uint64_t seed) {
  std::mt19937_64 engine(seed ^ Fnv1a(id.str()));
  return engine();
}

bool ValidWeight(double w) { return std::isfinite(w) && w >= 0.0; }

}  // namespace

double PriorityScore(const PriorityCriteria& criteria,
                     const PriorityWeights& weights) {
  return weights.family * static_cast<double>(criteria.family_size) +
         weights.health * criteria.health_risk +
         weights.wait * static_cast<double>(criteria.wait_time_days);
}

PriorityRanking ComputePriority(const Instance& instance,
                                const PriorityWeights& weights,
                                std::uint64_t seed) {
  if (!ValidWeight(weights.family) || !ValidWeight(weights.health) ||
      !ValidWeight(weights.wait)) {
    throw Error(ErrorCode::kInvalidWeights,
                "priority weights must be finite and nonnegative");
  }
  if (weights.family == 0.0 && weights.health == 0.0 && weights.wait == 0.0) {
    throw Error(ErrorCode::kInvalidWeights,
                "at least one priority weight must be positive");
  }

  struct Entry {
    double score;
    std::uint64_t key;
    const AgentId* id;
  };
  std::vector<Entry> entries;
  entries.reserve(instance.agents.size());
  for (const Agent& a : instance.agents) {
    entries.push_back({PriorityScore(a.criteria, weights),
                       TieBreakKey(a.id, seed), &a.id});
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& x, const Entry& y) {
              if (x.score != y.score) return x.score > y.score;
              return std::tie(x.key, *x.id) < std::tie(y.key, *y.id);
            });

  PriorityRanking ranking;
  ranking.order.reserve(entries.size());
  for (const Entry& e : entries) {
    ranking.order.push_back(*e.id);
    ranking.scores[*e.id] = e.score;
  }
  return ranking;
}

PriorityRanking ExplicitPriority(const Instance& instance,
                                 const std::vector<AgentId>& order) {
  std::set<AgentId> seen;
  for (const AgentId& id : order) {
    if (instance.FindAgent(id) == nullptr) {
      throw Error(ErrorCode::kInvalidOrder,
                  "priority order names unknown agent '" + id.str() + "'");
    }
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::kInvalidOrder,
                  "priority order lists agent '" + id.str() + "' twice");
    }
  }
  if (seen.size() != instance.agents.size()) {
    for (const Agent& a : instance.agents) {
      if (!seen.contains(a.id)) {
        throw Error(ErrorCode::kInvalidOrder,
                    "priority order is missing agent '" + a.id.str() + "'");
      }
    }
  }

  PriorityRanking ranking;
  ranking.order = order;
  double score = static_cast<double>(order.size());
  for (const AgentId& id : order) ranking.scores[id] = score--;
  return ranking;
}

void CheckRankingCoversInstance(const PriorityRanking& ranking,
                                const Instance& instance) {
  std::set<AgentId> seen;
  for (const AgentId& id : ranking.order) {
    if (instance.FindAgent(id) == nullptr || !seen.insert(id).second) {
      throw Error(ErrorCode::kInvalidRanking,
                  "ranking entry '" + id.str() +
                      "' is unknown or repeated for this instance");
    }
  }
  if (seen.size() != instance.agents.size()) {
    throw Error(ErrorCode::kInvalidRanking,
                "ranking does not cover every agent of the instance");
  }
}

}  // namespace havenmatch
