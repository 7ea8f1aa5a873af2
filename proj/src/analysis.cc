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

#include "havenmatch/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "havenmatch/error.h"

namespace havenmatch {
namespace {

constexpr std::size_t kUnrankedPosition = std::numeric_limits<std::size_t>::max();

const Agent& RequireAgent(const Instance& instance, const AgentId& id) {
  const Agent* agent = instance.FindAgent(id);
  if (agent == nullptr) {
    throw Error(ErrorCode::kUnknownAgent, "unknown agent '" + id.str() + "'");
  }
  return *agent;
}

void RequireMatchingOf(const Matching& matching, const Instance& instance,
                       const char* which) {
  const std::vector<Violation> violations =
      ValidateMatching(matching, instance);
  if (!violations.empty()) {
    throw Error(ErrorCode::kInstanceMismatch,
                std::string(which) + " matching does not fit the instance: " +
                    violations.front().message);
  }
}

// Depth-first walk over feasible matchings. Agent a may take any option of
// choices[a] (their acceptable options, most preferred first) not yet used,
// or stay outside (-1).
class FeasibleMatchingWalker {
 public:
  explicit FeasibleMatchingWalker(const Instance& instance) {
    std::map<OptionId, int> index;
    for (std::size_t k = 0; k < instance.options.size(); ++k) {
      index.emplace(instance.options[k].id, static_cast<int>(k));
    }
    for (const Agent& agent : instance.agents) {
      std::vector<int> list;
      for (const OptionId& opt : agent.preferences) {
        if (auto it = index.find(opt); it != index.end()) {
          list.push_back(it->second);
        }
      }
      choices_.push_back(std::move(list));
    }
    used_.assign(instance.options.size(), false);
  }

  std::uint64_t Count(std::uint64_t cap) {
    std::uint64_t count = 0;
    CountFrom(0, cap, count);
    return count;
  }

  // `leaf` gets, per agent, the position in their acceptable list or
  // kUnrankedPosition for outside; returns false to stop the walk.
  template <typename Leaf>
  void Walk(Leaf&& leaf) {
    std::vector<std::size_t> positions(choices_.size(), kUnrankedPosition);
    WalkFrom(0, positions, leaf);
  }

  int OptionAt(std::size_t agent, std::size_t position) const {
    return choices_[agent][position];
  }

 private:
  void CountFrom(std::size_t agent, std::uint64_t cap, std::uint64_t& count) {
    if (count > cap) return;
    if (agent == choices_.size()) {
      ++count;
      return;
    }
    for (int k : choices_[agent]) {
      if (used_[k]) continue;
      used_[k] = true;
      CountFrom(agent + 1, cap, count);
      used_[k] = false;
    }
    CountFrom(agent + 1, cap, count);
  }

  template <typename Leaf>
  bool WalkFrom(std::size_t agent, std::vector<std::size_t>& positions,
                Leaf& leaf) {
    if (agent == choices_.size()) return leaf(positions);
    const std::vector<int>& list = choices_[agent];
    for (std::size_t pos = 0; pos < list.size(); ++pos) {
      const int k = list[pos];
      if (used_[k]) continue;
      used_[k] = true;
      positions[agent] = pos;
      const bool go_on = WalkFrom(agent + 1, positions, leaf);
      used_[k] = false;
      if (!go_on) return false;
    }
    positions[agent] = kUnrankedPosition;
    return WalkFrom(agent + 1, positions, leaf);
  }

  std::vector<std::vector<int>> choices_;
  std::vector<bool> used_;
};

PriorityRanking RankingFromOrder(const Instance& instance,
                                 const std::vector<std::size_t>& order) {
  PriorityRanking ranking;
  ranking.order.reserve(order.size());
  double score = static_cast<double>(order.size());
  for (std::size_t idx : order) {
    const AgentId& id = instance.agents[idx].id;
    ranking.order.push_back(id);
    ranking.scores[id] = score--;
  }
  return ranking;
}

Instance WithDeviation(const Instance& instance, const AgentId& deviator,
                       const Deviation& deviation) {
  if (!deviation.preferences) return instance;
  Instance copy = instance;
  for (Agent& a : copy.agents) {
    if (a.id == deviator) a.preferences = *deviation.preferences;
  }
  RequireValidInstance(copy);
  return copy;
}

Outcome DeviantOutcome(MechanismKind mechanism, const Instance& instance,
                       const PriorityRanking& ranking,
                       const RoutingPolicy& policy, const AgentId& deviator,
                       const Deviation& deviation) {
  const Instance reported = WithDeviation(instance, deviator, deviation);
  ReportedLocalities localities;
  if (deviation.locality) localities[deviator] = *deviation.locality;
  return RunMechanism(mechanism, reported, ranking, policy, localities)
      .matching.at(deviator);
}

bool IsFullyMerged(const ProviderGrouping& grouping) {
  return grouping.size() == 1;
}

}  // namespace

const char* DominanceOutcomeName(DominanceOutcome outcome) {
  switch (outcome) {
    case DominanceOutcome::kDominates: return "Dominates";
    case DominanceOutcome::kDominatedBy: return "DominatedBy";
    case DominanceOutcome::kIncomparable: return "Incomparable";
    case DominanceOutcome::kEqual: return "Equal";
  }
  return "?";
}

DominanceVerdict CheckDominance(const Matching& x_prime, const Matching& x,
                                const Instance& instance) {
  RequireMatchingOf(x_prime, instance, "first");
  RequireMatchingOf(x, instance, "second");

  DominanceVerdict verdict;
  bool identical = true;
  for (const Agent& agent : instance.agents) {
    const Outcome& a = x_prime.at(agent.id);
    const Outcome& b = x.at(agent.id);
    if (a != b) identical = false;
    switch (Prefers(agent, a, b)) {
      case Preference::kStrictlyBetter:
        verdict.improving.push_back(agent.id);
        break;
      case Preference::kStrictlyWorse:
        verdict.worsening.push_back(agent.id);
        break;
      case Preference::kEqual:
        break;
    }
  }
  if (identical) {
    verdict.outcome = DominanceOutcome::kEqual;
  } else if (!verdict.improving.empty() && verdict.worsening.empty()) {
    verdict.outcome = DominanceOutcome::kDominates;
  } else if (verdict.improving.empty() && !verdict.worsening.empty()) {
    verdict.outcome = DominanceOutcome::kDominatedBy;
  } else {
    verdict.outcome = DominanceOutcome::kIncomparable;
  }
  return verdict;
}

std::uint64_t CountFeasibleMatchings(const Instance& instance,
                                     std::uint64_t cap) {
  return FeasibleMatchingWalker(instance).Count(cap);
}

ParetoVerdict IsParetoOptimal(const Matching& x, const Instance& instance,
                              std::uint64_t budget) {
  RequireMatchingOf(x, instance, "audited");

  FeasibleMatchingWalker walker(instance);
  ParetoVerdict verdict;
  verdict.candidates = walker.Count(budget);
  if (verdict.candidates > budget) {
    throw Error(ErrorCode::kBudgetExceeded,
                "more than " + std::to_string(budget) +
                    " feasible matchings; exhaustive audit refused");
  }

  // Position of x's outcome in each agent's acceptable list.
  const std::size_t n = instance.agents.size();
  std::vector<std::size_t> x_position(n, kUnrankedPosition);
  for (std::size_t a = 0; a < n; ++a) {
    const Agent& agent = instance.agents[a];
    const Outcome& got = x.at(agent.id);
    if (!got) continue;
    std::size_t pos = 0;
    for (const OptionId& opt : agent.preferences) {
      if (instance.FindOption(opt) == nullptr) continue;
      if (opt == *got) {
        x_position[a] = pos;
        break;
      }
      ++pos;
    }
  }

  walker.Walk([&](const std::vector<std::size_t>& positions) {
    bool strictly_better = false;
    for (std::size_t a = 0; a < n; ++a) {
      if (positions[a] > x_position[a]) return true;
      if (positions[a] < x_position[a]) strictly_better = true;
    }
    if (!strictly_better) return true;

    Matching candidate;
    for (std::size_t a = 0; a < n; ++a) {
      Outcome outcome;
      if (positions[a] != kUnrankedPosition) {
        outcome = instance.options[walker.OptionAt(a, positions[a])].id;
      }
      candidate.Assign(instance.agents[a].id, std::move(outcome));
    }
    if (CheckDominance(candidate, x, instance).outcome !=
        DominanceOutcome::kDominates) {
      return true;
    }
    verdict.optimal = false;
    verdict.witness = std::move(candidate);
    return false;
  });
  return verdict;
}

ManipulationReport EvaluateDeviation(MechanismKind mechanism,
                                     const Instance& instance,
                                     const PriorityRanking& ranking,
                                     const RoutingPolicy& policy,
                                     const AgentId& deviator,
                                     const Deviation& deviation) {
  const Agent& agent = RequireAgent(instance, deviator);
  ManipulationReport report;
  report.deviator = deviator;
  report.deviation = deviation;
  report.truthful_outcome =
      RunMechanism(mechanism, instance, ranking, policy).matching.at(deviator);
  report.deviant_outcome = DeviantOutcome(mechanism, instance, ranking, policy,
                                          deviator, deviation);
  report.profitable = Prefers(agent, report.deviant_outcome,
                              report.truthful_outcome) ==
                      Preference::kStrictlyBetter;
  return report;
}

StrategyProofnessResult CheckStrategyProofness(
    MechanismKind mechanism, const Instance& instance,
    const PriorityRanking& ranking, const AgentId& deviator,
    std::size_t budget, const RoutingPolicy& policy, std::uint64_t seed) {
  const Agent& agent = RequireAgent(instance, deviator);

  StrategyProofnessResult result;
  result.deviator = deviator;
  result.truthful_outcome =
      RunMechanism(mechanism, instance, ranking, policy).matching.at(deviator);

  // Candidate preference reports.
  const std::vector<OptionId>& truth = agent.preferences;
  std::vector<std::vector<OptionId>> reports;
  std::vector<std::size_t> perm(truth.size());
  std::iota(perm.begin(), perm.end(), 0);
  auto apply = [&](const std::vector<std::size_t>& p) {
    std::vector<OptionId> list;
    list.reserve(p.size());
    for (std::size_t idx : p) list.push_back(truth[idx]);
    return list;
  };
  if (truth.size() <= kMaxExhaustivePermutationLength) {
    do {
      reports.push_back(apply(perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    result.exhaustive = false;
    reports.push_back(truth);
    std::mt19937_64 engine(seed);
    for (std::size_t s = 0; s < budget; ++s) {
      std::shuffle(perm.begin(), perm.end(), engine);
      reports.push_back(apply(perm));
    }
  }

  // Candidate locality reports.
  std::set<std::string> localities{agent.locality};
  if (mechanism == MechanismKind::kLocalityRestricted) {
    for (const Provider& p : instance.providers) localities.insert(p.locality);
  }

  for (const std::string& locality : localities) {
    for (const std::vector<OptionId>& list : reports) {
      Deviation deviation;
      if (list != truth) deviation.preferences = list;
      if (locality != agent.locality) deviation.locality = locality;
      if (!deviation.preferences && !deviation.locality) continue;

      ++result.deviations_tried;
      const Outcome deviant = DeviantOutcome(mechanism, instance, ranking,
                                             policy, deviator, deviation);
      if (Prefers(agent, deviant, result.truthful_outcome) ==
          Preference::kStrictlyBetter) {
        result.profitable.push_back(ManipulationReport{
            deviator, std::move(deviation), result.truthful_outcome, deviant,
            true});
      }
    }
  }
  return result;
}

MechanismComparison CompareMechanisms(const Instance& instance,
                                      const PriorityRanking& ranking,
                                      const RoutingPolicy& policy) {
  MechanismComparison comparison;
  comparison.serial_dictatorship = SerialDictatorship(instance, ranking);
  comparison.locality_restricted = LocalityRestricted(instance, ranking, policy);
  comparison.verdict =
      CheckDominance(comparison.serial_dictatorship.matching,
                     comparison.locality_restricted.matching, instance);
  return comparison;
}

void UtilityModel::Set(const AgentId& agent, const Outcome& outcome,
                       double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw Error(ErrorCode::kInvalidUtility,
                "utilities must be finite and nonnegative");
  }
  overrides_[{agent, outcome}] = value;
}

double UtilityModel::Utility(const Instance& instance, const Agent& agent,
                             const Outcome& outcome) const {
  if (auto it = overrides_.find({agent.id, outcome}); it != overrides_.end()) {
    return it->second;
  }
  const Rank rank = RankOf(agent, outcome);
  if (!rank) return 0.0;
  const double m = static_cast<double>(instance.options.size());
  return std::max(0.0, m - static_cast<double>(*rank));
}

OutcomeDistribution RandomPriorityOutcomes(const Instance& instance,
                                           const AgentId& agent,
                                           const PrioritySampler& sampler,
                                           const RoundRunner& run) {
  RequireAgent(instance, agent);
  const std::size_t n = instance.agents.size();
  std::map<Outcome, std::uint64_t> counts;
  std::uint64_t total = 0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  if (std::holds_alternative<ExhaustivePriorityOrders>(sampler)) {
    if (n > kMaxExhaustiveAgents) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "exhaustive priority enumeration needs at most " +
                      std::to_string(kMaxExhaustiveAgents) + " agents");
    }
    do {
      ++counts[run(RankingFromOrder(instance, order)).matching.at(agent)];
      ++total;
    } while (std::next_permutation(order.begin(), order.end()));
  } else {
    const MonteCarloSeeded& mc = std::get<MonteCarloSeeded>(sampler);
    std::mt19937_64 engine(mc.seed);
    for (std::size_t s = 0; s < mc.samples; ++s) {
      std::shuffle(order.begin(), order.end(), engine);
      ++counts[run(RankingFromOrder(instance, order)).matching.at(agent)];
      ++total;
    }
  }

  OutcomeDistribution distribution;
  for (const auto& [outcome, count] : counts) {
    distribution[outcome] =
        static_cast<double>(count) / static_cast<double>(total);
  }
  return distribution;
}

namespace {

double ExpectationOf(const Instance& instance, const Agent& agent,
                     const UtilityModel& model,
                     const OutcomeDistribution& distribution) {
  double u = 0.0;
  for (const auto& [outcome, p] : distribution) {
    u += model.Utility(instance, agent, outcome) * p;
  }
  return u;
}

}  // namespace

double ExpectedUtility(const Instance& instance, const AgentId& agent,
                       const UtilityModel& model,
                       const PrioritySampler& sampler) {
  const Agent& a = RequireAgent(instance, agent);
  const OutcomeDistribution distribution = RandomPriorityOutcomes(
      instance, agent, sampler, [&](const PriorityRanking& ranking) {
        return SerialDictatorship(instance, ranking);
      });
  return ExpectationOf(instance, a, model, distribution);
}

void ValidateCoarseningChain(const Instance& instance,
                             const std::vector<ProviderGrouping>& chain) {
  if (chain.empty()) {
    throw Error(ErrorCode::kInvalidChain, "merge chain is empty");
  }
  std::vector<std::map<ProviderId, std::size_t>> group_of;
  for (std::size_t g = 0; g < chain.size(); ++g) {
    std::map<ProviderId, std::size_t> index;
    for (std::size_t k = 0; k < chain[g].size(); ++k) {
      if (chain[g][k].empty()) {
        throw Error(ErrorCode::kInvalidChain, "grouping " + std::to_string(g) +
                                                  " has an empty group");
      }
      for (const ProviderId& p : chain[g][k]) {
        if (instance.FindProvider(p) == nullptr) {
          throw Error(ErrorCode::kInvalidChain,
                      "unknown provider '" + p.str() + "' in merge chain");
        }
        if (!index.emplace(p, k).second) {
          throw Error(ErrorCode::kInvalidChain,
                      "provider '" + p.str() + "' appears twice in grouping " +
                          std::to_string(g));
        }
      }
    }
    if (index.size() != instance.providers.size()) {
      throw Error(ErrorCode::kInvalidChain,
                  "grouping " + std::to_string(g) +
                      " does not cover every provider");
    }
    group_of.push_back(std::move(index));
  }
  // Providers sharing a group must keep sharing one further down the chain.
  for (std::size_t g = 1; g < chain.size(); ++g) {
    for (const ProviderGroup& group : chain[g - 1]) {
      const std::size_t target = group_of[g].at(group.front());
      for (const ProviderId& p : group) {
        if (group_of[g].at(p) != target) {
          throw Error(ErrorCode::kInvalidChain,
                      "grouping " + std::to_string(g) +
                          " splits providers merged in grouping " +
                          std::to_string(g - 1));
        }
      }
    }
  }
}

std::vector<ExpansionRow> LocalityExpansionReport(
    const Instance& instance, const AgentId& agent,
    const std::vector<ProviderGrouping>& chain, const UtilityModel& model,
    const PrioritySampler& sampler, const RoutingPolicy& policy) {
  const Agent& a = RequireAgent(instance, agent);
  ValidateCoarseningChain(instance, chain);
  ValidatePolicy(policy, instance);

  std::vector<ProviderGrouping> full_chain = chain;
  if (!IsFullyMerged(full_chain.back()) && !instance.providers.empty()) {
    ProviderGroup everyone;
    for (const Provider& p : instance.providers) everyone.push_back(p.id);
    full_chain.push_back({std::move(everyone)});
  }

  std::vector<ExpansionRow> rows;
  for (const ProviderGrouping& grouping : full_chain) {
    const OutcomeDistribution distribution = RandomPriorityOutcomes(
        instance, agent, sampler, [&](const PriorityRanking& ranking) {
          return LocalityRestricted(instance, ranking, policy, {}, grouping);
        });
    rows.push_back({grouping, ExpectationOf(instance, a, model, distribution)});
  }
  return rows;
}

}  // namespace havenmatch
