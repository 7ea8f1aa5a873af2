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

#include "havenmatch/mechanism.h"

#include <functional>
#include <set>

#include "havenmatch/error.h"

namespace havenmatch {
namespace {

constexpr int kNoPool = -1;

// Serves agents in ranking order. `option_pool[k]` is the pool of option k;
// `pool_for` gives the pool an agent may pick from, or kNoPool.
RoundResult ServeInOrder(const Instance& instance,
                         const PriorityRanking& ranking,
                         const std::vector<int>& option_pool,
                         const std::function<int(const Agent&)>& pool_for) {
  CheckRankingCoversInstance(ranking, instance);

  std::map<OptionId, std::size_t> option_index;
  for (std::size_t k = 0; k < instance.options.size(); ++k) {
    option_index.emplace(instance.options[k].id, k);
  }
  std::vector<bool> taken(instance.options.size(), false);

  RoundResult result;
  result.trace.reserve(ranking.order.size());
  for (const AgentId& id : ranking.order) {
    const Agent& agent = *instance.FindAgent(id);
    const int pool = pool_for(agent);

    TraceStep step;
    step.agent = id;
    if (pool != kNoPool) {
      for (std::size_t k = 0; k < instance.options.size(); ++k) {
        if (!taken[k] && option_pool[k] == pool) {
          step.available.push_back(instance.options[k].id);
        }
      }
      for (const OptionId& want : agent.preferences) {
        auto it = option_index.find(want);
        if (it == option_index.end()) continue;
        const std::size_t k = it->second;
        if (!taken[k] && option_pool[k] == pool) {
          taken[k] = true;
          step.chosen = want;
          break;
        }
      }
    }
    result.matching.Assign(id, step.chosen);
    result.trace.push_back(std::move(step));
  }
  return result;
}

std::string ReportedLocality(const Agent& agent,
                             const ReportedLocalities& reported) {
  auto it = reported.find(agent.id);
  return it == reported.end() ? agent.locality : it->second;
}

RoundResult PooledRouting(const Instance& instance,
                          const PriorityRanking& ranking,
                          const RoutingPolicy& policy,
                          const ReportedLocalities& reported,
                          const ProviderGrouping& pools,
                          bool merge_all_when_single_pool) {
  ValidatePolicy(policy, instance);

  std::map<ProviderId, int> pool_of_provider;
  for (std::size_t g = 0; g < pools.size(); ++g) {
    for (const ProviderId& p : pools[g]) {
      if (instance.FindProvider(p) == nullptr) {
        throw Error(ErrorCode::kInvalidPolicy,
                    "provider pool names unknown provider '" + p.str() + "'");
      }
      if (!pool_of_provider.emplace(p, static_cast<int>(g)).second) {
        throw Error(ErrorCode::kInvalidPolicy,
                    "provider '" + p.str() + "' appears in two pools");
      }
    }
  }
  if (pool_of_provider.size() != instance.providers.size()) {
    throw Error(ErrorCode::kInvalidPolicy,
                "provider pools do not cover every provider");
  }

  std::vector<int> option_pool;
  option_pool.reserve(instance.options.size());
  for (const HousingOption& o : instance.options) {
    auto it = pool_of_provider.find(o.provider);
    option_pool.push_back(it == pool_of_provider.end() ? kNoPool : it->second);
  }

  const bool fully_pooled = merge_all_when_single_pool && pools.size() == 1;
  return ServeInOrder(
      instance, ranking, option_pool, [&](const Agent& agent) {
        if (fully_pooled) return 0;
        const std::optional<ProviderId> provider = RouteAgent(
            instance, agent.id, ReportedLocality(agent, reported), policy);
        if (!provider) return kNoPool;
        return pool_of_provider.at(*provider);
      });
}

}  // namespace

const char* MechanismName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kSerialDictatorship: return "sd";
    case MechanismKind::kLocalityRestricted: return "locality";
  }
  return "?";
}

std::optional<MechanismKind> ParseMechanism(std::string_view name) {
  if (name == "sd") return MechanismKind::kSerialDictatorship;
  if (name == "locality") return MechanismKind::kLocalityRestricted;
  return std::nullopt;
}

void ValidatePolicy(const RoutingPolicy& policy, const Instance& instance) {
  for (const auto& [agent, provider] : policy.overrides) {
    if (instance.FindAgent(agent) == nullptr) {
      throw Error(ErrorCode::kInvalidPolicy,
                  "routing override for unknown agent '" + agent.str() + "'");
    }
    if (instance.FindProvider(provider) == nullptr) {
      throw Error(ErrorCode::kInvalidPolicy,
                  "routing override to unknown provider '" + provider.str() +
                      "'");
    }
  }
}

std::optional<ProviderId> RouteAgent(const Instance& instance,
                                     const AgentId& agent,
                                     const std::string& locality,
                                     const RoutingPolicy& policy) {
  if (auto it = policy.overrides.find(agent); it != policy.overrides.end()) {
    return it->second;
  }
  std::optional<ProviderId> best;
  for (const Provider& p : instance.providers) {
    if (p.locality == locality && (!best || p.id < *best)) best = p.id;
  }
  return best;
}

RoundResult SerialDictatorship(const Instance& instance,
                               const PriorityRanking& ranking) {
  const std::vector<int> one_pool(instance.options.size(), 0);
  return ServeInOrder(instance, ranking, one_pool,
                      [](const Agent&) { return 0; });
}

RoundResult LocalityRestricted(const Instance& instance,
                               const PriorityRanking& ranking,
                               const RoutingPolicy& policy,
                               const ReportedLocalities& reported) {
  ProviderGrouping singletons;
  singletons.reserve(instance.providers.size());
  for (const Provider& p : instance.providers) singletons.push_back({p.id});
  return PooledRouting(instance, ranking, policy, reported, singletons,
                       /*merge_all_when_single_pool=*/false);
}

RoundResult LocalityRestricted(const Instance& instance,
                               const PriorityRanking& ranking,
                               const RoutingPolicy& policy,
                               const ReportedLocalities& reported,
                               const ProviderGrouping& pools) {
  return PooledRouting(instance, ranking, policy, reported, pools,
                       /*merge_all_when_single_pool=*/true);
}

RoundResult RunMechanism(MechanismKind kind, const Instance& instance,
                         const PriorityRanking& ranking,
                         const RoutingPolicy& policy,
                         const ReportedLocalities& reported) {
  switch (kind) {
    case MechanismKind::kSerialDictatorship:
      return SerialDictatorship(instance, ranking);
    case MechanismKind::kLocalityRestricted:
      return LocalityRestricted(instance, ranking, policy, reported);
  }
  throw Error(ErrorCode::kInvalidPolicy, "unknown mechanism");
}

}  // namespace havenmatch
