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

// Executable checks of the mechanisms' properties: Pareto dominance and a
// brute-force Pareto optimality oracle, a unilateral-misreport fuzzer,
// head-to-head mechanism comparison, and expected utility under a randomized
// priority queue (also across progressively merged provider pools).

#ifndef HAVENMATCH_ANALYSIS_H_
#define HAVENMATCH_ANALYSIS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "havenmatch/mechanism.h"
#include "havenmatch/model.h"
#include "havenmatch/priority.h"

namespace havenmatch {

// ---------------------------------------------------------------------------
// Dominance

enum class DominanceOutcome { kDominates, kDominatedBy, kIncomparable, kEqual };

const char* DominanceOutcomeName(DominanceOutcome outcome);

struct DominanceVerdict {
  DominanceOutcome outcome = DominanceOutcome::kEqual;
  // Agents strictly better / strictly worse off under the first matching.
  std::vector<AgentId> improving;
  std::vector<AgentId> worsening;
};

// Compares `x_prime` against `x`. kDominates means every agent weakly prefers
// x_prime and at least one strictly does; kEqual means identical images.
// Throws Error(kInstanceMismatch) if either matching is invalid for the
// instance.
DominanceVerdict CheckDominance(const Matching& x_prime, const Matching& x,
                                const Instance& instance);

// ---------------------------------------------------------------------------
// Pareto optimality oracle

inline constexpr std::uint64_t kDefaultOracleBudget = 10'000'000;

struct ParetoVerdict {
  bool optimal = true;
  std::optional<Matching> witness;  // a matching that dominates, if any
  std::uint64_t candidates = 0;     // feasible matchings in the instance
};

// Number of feasible matchings (each agent gets a listed option or Outside,
// no option used twice). Counting stops once `cap` is exceeded, in which case
// cap + 1 is returned.
std::uint64_t CountFeasibleMatchings(const Instance& instance,
                                     std::uint64_t cap);

// Exhaustive search over every feasible matching.
// Throws Error(kBudgetExceeded) when there are more than `budget` of them,
// and Error(kInstanceMismatch) if `x` is not a matching of the instance.
ParetoVerdict IsParetoOptimal(const Matching& x, const Instance& instance,
                              std::uint64_t budget = kDefaultOracleBudget);

// ---------------------------------------------------------------------------
// Strategy-proofness fuzzing

// A unilateral misreport. Unset fields are reported truthfully.
struct Deviation {
  std::optional<std::vector<OptionId>> preferences;
  std::optional<std::string> locality;

  friend bool operator==(const Deviation&, const Deviation&) = default;
};

struct ManipulationReport {
  AgentId deviator;
  Deviation deviation;
  Outcome truthful_outcome;
  Outcome deviant_outcome;
  // Strict improvement judged by the deviator's true preferences.
  bool profitable = false;
};

struct StrategyProofnessResult {
  AgentId deviator;
  Outcome truthful_outcome;
  std::size_t deviations_tried = 0;
  bool exhaustive = true;
  std::vector<ManipulationReport> profitable;
};

// Preference lists up to this length are permuted exhaustively.
inline constexpr std::size_t kMaxExhaustivePermutationLength = 6;

// Runs the mechanism once truthfully and once with `deviation` applied.
// Throws Error(kUnknownAgent).
ManipulationReport EvaluateDeviation(MechanismKind mechanism,
                                     const Instance& instance,
                                     const PriorityRanking& ranking,
                                     const RoutingPolicy& policy,
                                     const AgentId& deviator,
                                     const Deviation& deviation);

// Sweeps the deviator's misreports: every permutation of their preference
// list (or `budget` seeded random permutations for lists longer than
// kMaxExhaustivePermutationLength) and, for the locality mechanism, every
// provider locality. Throws Error(kUnknownAgent).
StrategyProofnessResult CheckStrategyProofness(
    MechanismKind mechanism, const Instance& instance,
    const PriorityRanking& ranking, const AgentId& deviator,
    std::size_t budget, const RoutingPolicy& policy = {},
    std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Mechanism comparison

struct MechanismComparison {
  // CheckDominance(serial dictatorship, locality restricted).
  DominanceVerdict verdict;
  RoundResult serial_dictatorship;
  RoundResult locality_restricted;
};

MechanismComparison CompareMechanisms(const Instance& instance,
                                      const PriorityRanking& ranking,
                                      const RoutingPolicy& policy = {});

// ---------------------------------------------------------------------------
// Expected utility

// u(agent, option) defaults to m - rank (m = number of options); Outside and
// unlisted options are worth 0. Individual values can be overridden.
class UtilityModel {
 public:
  // Throws Error(kInvalidUtility) for negative or non-finite values.
  void Set(const AgentId& agent, const Outcome& outcome, double value);

  double Utility(const Instance& instance, const Agent& agent,
                 const Outcome& outcome) const;

 private:
  std::map<std::pair<AgentId, Outcome>, double> overrides_;
};

struct ExhaustivePriorityOrders {};
struct MonteCarloSeeded {
  std::size_t samples = 100'000;
  std::uint64_t seed = 0;
};
using PrioritySampler = std::variant<ExhaustivePriorityOrders, MonteCarloSeeded>;

inline constexpr std::size_t kMaxExhaustiveAgents = 8;

// Probability of each outcome for `agent` when the priority order is uniform
// over all orders (exactly, or estimated by sampling). `run` maps a ranking to
// a round result. Throws Error(kUnknownAgent), or Error(kBudgetExceeded) for
// exhaustive sampling with more than kMaxExhaustiveAgents agents.
using OutcomeDistribution = std::map<Outcome, double>;
using RoundRunner = std::function<RoundResult(const PriorityRanking&)>;

OutcomeDistribution RandomPriorityOutcomes(const Instance& instance,
                                           const AgentId& agent,
                                           const PrioritySampler& sampler,
                                           const RoundRunner& run);

// U = sum over outcomes of u(outcome) * p(outcome) under serial dictatorship.
double ExpectedUtility(const Instance& instance, const AgentId& agent,
                       const UtilityModel& model,
                       const PrioritySampler& sampler);

struct ExpansionRow {
  ProviderGrouping grouping;
  double expected_utility = 0.0;
};

// Throws Error(kInvalidChain) unless every grouping partitions the providers
// and each one merges groups of the one before.
void ValidateCoarseningChain(const Instance& instance,
                             const std::vector<ProviderGrouping>& chain);

// Expected utility of `agent` under the locality mechanism for each grouping
// of the chain. A fully merged grouping is appended if the chain does not end
// with one; its value equals the serial dictatorship value.
std::vector<ExpansionRow> LocalityExpansionReport(
    const Instance& instance, const AgentId& agent,
    const std::vector<ProviderGrouping>& chain, const UtilityModel& model,
    const PrioritySampler& sampler, const RoutingPolicy& policy = {});

}  // namespace havenmatch

#endif  // HAVENMATCH_ANALYSIS_H_
