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

#ifndef HAVENMATCH_PRIORITY_H_
#define HAVENMATCH_PRIORITY_H_

#include <cstdint>
#include <map>
#include <vector>

#include "havenmatch/model.h"

namespace havenmatch {

// Linear scoring weights over PriorityCriteria. All weights must be finite
// and nonnegative with at least one strictly positive.
struct PriorityWeights {
  double family = 1.0;
  double health = 1.0;
  double wait = 1.0;

  friend bool operator==(const PriorityWeights&,
                         const PriorityWeights&) = default;
};

// The serving queue: `order` lists every agent once, highest priority first,
// and `scores` is non-increasing along `order`.
struct PriorityRanking {
  std::vector<AgentId> order;
  std::map<AgentId, double> scores;

  friend bool operator==(const PriorityRanking&,
                         const PriorityRanking&) = default;
};

double PriorityScore(const PriorityCriteria& criteria,
                     const PriorityWeights& weights);

// Orders agents by descending weighted score. Agents with equal scores are
// ordered by a per-agent key drawn from a std::mt19937_64 seeded with
// `seed` mixed with the agent id, so the result depends only on the inputs.
// Throws Error(kInvalidWeights).
PriorityRanking ComputePriority(const Instance& instance,
                                const PriorityWeights& weights,
                                std::uint64_t seed);

// Uses `order` verbatim; scores are n, n-1, ..., 1.
// Throws Error(kInvalidOrder) unless `order` is a permutation of the agents.
PriorityRanking ExplicitPriority(const Instance& instance,
                                 const std::vector<AgentId>& order);

// Throws Error(kInvalidRanking) unless `ranking.order` covers every agent of
// the instance exactly once.
void CheckRankingCoversInstance(const PriorityRanking& ranking,
                                const Instance& instance);

}  // namespace havenmatch

#endif  // HAVENMATCH_PRIORITY_H_
