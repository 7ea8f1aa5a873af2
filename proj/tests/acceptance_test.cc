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

// Acceptance gate: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "havenmatch/analysis.h"
#include "havenmatch/instance_io.h"
#include "havenmatch/mechanism.h"
#include "havenmatch/priority.h"
#include "havenmatch/round_log.h"
#include "test_support.h"

namespace havenmatch {
namespace {

using ::havenmatch::testing::A;
using ::havenmatch::testing::AllPermutations;
using ::havenmatch::testing::AllProfiles;
using ::havenmatch::testing::Fixture;
using ::havenmatch::testing::IndexedInstance;
using ::havenmatch::testing::IndexedRanking;
using ::havenmatch::testing::MakeMatching;
using ::havenmatch::testing::O;
using ::havenmatch::testing::OracleSerialDictatorship;
using ::havenmatch::testing::Order;
using ::havenmatch::testing::Prefs;
using ::havenmatch::testing::RandomRanking;
using ::havenmatch::testing::RandomTwoProviderInstance;

using Clock = std::chrono::steady_clock;

// Collects failed checks for one criterion.
class Checks {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  bool ok() const { return failures_.empty(); }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

struct CriterionResult {
  bool pass;
  std::string detail;
};

int failed = 0;

void Report(const std::string& name, const std::function<CriterionResult()>& body) {
  const auto start = Clock::now();
  CriterionResult r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(Clock::now() - start).count();
  std::ostringstream line;
  line << (r.pass ? "PASS" : "FAIL") << "  " << name << "  (" << r.detail
       << "; " << std::fixed;
  line.precision(2);
  line << secs << " s)";
  std::cout << line.str() << std::endl;
  if (!r.pass) ++failed;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Summarize(const Checks& c, std::size_t total) {
  if (c.ok()) return std::to_string(total) + " checks";
  return std::to_string(c.failures().size()) + " of " +
         std::to_string(total) + " checks failed: " + c.failures().front();
}

// ---------------------------------------------------------------------------

CriterionResult WorkedExamples() {
  const auto start = Clock::now();
  Checks c;
  std::size_t n = 0;
  auto sd = [](const char* fixture, const char* order) {
    const Instance inst = LoadInstance(Fixture(fixture));
    return SerialDictatorship(inst, ExplicitPriority(inst, Order(order)))
        .matching;
  };
  auto loc = [](const Instance& inst, const char* order) {
    return LocalityRestricted(inst, ExplicitPriority(inst, Order(order)), {})
        .matching;
  };

  ++n, c.Expect(sd("ex312a.json", "ijk") ==
                    MakeMatching({{"i", "a"}, {"j", "b"}, {"k", "c"}}),
                "profile 1");
  ++n, c.Expect(sd("ex312b.json", "ijk") ==
                    MakeMatching({{"i", "a"}, {"j", "c"}, {"k", "b"}}),
                "profile 2");
  ++n, c.Expect(sd("ex313.json", "ijkl") ==
                    MakeMatching(
                        {{"i", "a"}, {"j", "b"}, {"k", "c"}, {"l", nullptr}}),
                "four agents, three options");

  const Instance e321 = LoadInstance(Fixture("ex321.json"));
  ++n, c.Expect(sd("ex321.json", "ijk") ==
                    MakeMatching({{"i", "c"}, {"j", "b"}, {"k", "a"}}),
                "strategy-proofness example");
  const ManipulationReport j_abc = EvaluateDeviation(
      MechanismKind::kSerialDictatorship, e321,
      ExplicitPriority(e321, Order("ijk")), {}, A("j"),
      Deviation{Prefs("abc"), std::nullopt});
  ++n, c.Expect(j_abc.deviant_outcome == Outcome(O("a")) && !j_abc.profitable,
                "j's misreport a>b>c yields a and is not profitable");

  Instance e431 = LoadInstance(Fixture("ex431.json"));
  ++n, c.Expect(loc(e431, "i") == MakeMatching({{"i", "b"}}),
                "single agent at P gets b");
  Instance e431_south = e431;
  e431_south.agents[0].locality = "south";
  ++n, c.Expect(loc(e431_south, "i") == MakeMatching({{"i", "z"}}),
                "single agent at Q gets z");
  ++n, c.Expect(sd("ex431.json", "i") == MakeMatching({{"i", "z"}}),
                "pooled gets z");
  ++n, c.Expect(CompareMechanisms(e431, ExplicitPriority(e431, Order("i")))
                        .verdict.outcome == DominanceOutcome::kDominates,
                "comparison dominates");

  const Instance e432 = LoadInstance(Fixture("ex432.json"));
  ++n, c.Expect(loc(e432, "ij") == MakeMatching({{"i", "b"}, {"j", "z"}}),
                "two providers, locality");
  ++n, c.Expect(sd("ex432.json", "ij") ==
                    MakeMatching({{"i", "z"}, {"j", "a"}}),
                "two providers, pooled");

  const Instance e44 = LoadInstance(Fixture("ex44.json"));
  ++n, c.Expect(loc(e44, "ij") == MakeMatching({{"i", "a"}, {"j", "x"}}),
                "misreport example truthful");
  const StrategyProofnessResult sweep = CheckStrategyProofness(
      MechanismKind::kLocalityRestricted, e44,
      ExplicitPriority(e44, Order("ji")), A("j"), 1000);
  ++n, c.Expect(!sweep.profitable.empty(), "j can gain under j-i");

  const double secs = Seconds(start);
  ++n, c.Expect(secs < 1.0, "took " + std::to_string(secs) + " s");
  return {c.ok(), Summarize(c, n)};
}

CriterionResult ParetoAtDeskScale() {
  const auto start = Clock::now();
  int optimal = 0, runs = 0;
  for (const auto& prefs : AllProfiles(3, 3)) {
    const Instance inst = IndexedInstance(prefs, 3);
    for (const auto& order : AllPermutations(3)) {
      const Matching x =
          SerialDictatorship(inst, IndexedRanking(inst, order)).matching;
      ++runs;
      if (IsParetoOptimal(x, inst).optimal) ++optimal;
    }
  }
  const double secs = Seconds(start);
  return {optimal == 1296 && runs == 1296 && secs < 5.0,
          std::to_string(optimal) + "/" + std::to_string(runs) +
              " Pareto optimal"};
}

CriterionResult StrategyProofAtDeskScale() {
  const auto start = Clock::now();
  std::size_t tried = 0, profitable = 0, runs = 0;
  for (const auto& prefs : AllProfiles(3, 3)) {
    const Instance inst = IndexedInstance(prefs, 3);
    for (const auto& order : AllPermutations(3)) {
      const PriorityRanking r = IndexedRanking(inst, order);
      ++runs;
      for (const Agent& a : inst.agents) {
        const auto res = CheckStrategyProofness(
            MechanismKind::kSerialDictatorship, inst, r, a.id, 1000);
        tried += res.deviations_tried;
        profitable += res.profitable.size();
      }
    }
  }
  const double secs = Seconds(start);
  // Five misreports per agent besides the truthful list.
  return {profitable == 0 && runs == 1296 && tried == 1296 * 3 * 5 &&
              secs < 60.0,
          std::to_string(profitable) + " profitable of " +
              std::to_string(tried) + " misreports over " +
              std::to_string(runs) + " runs"};
}

struct RandomSweep {
  int instances = 0;
  int manipulable = 0;
  int locality_only_manipulable = 0;
  int alg2_dominates_sd = 0;
};

RandomSweep SweepRandomTwoProviderInstances() {
  RandomSweep out;
  std::mt19937_64 rng(20261016);
  for (int t = 0; t < 1000; ++t) {
    const Instance inst = RandomTwoProviderInstance(rng, 4, 4);
    const PriorityRanking r = RandomRanking(rng, inst);
    ++out.instances;
    bool any = false, locality_only = false;
    for (const Agent& a : inst.agents) {
      const auto res = CheckStrategyProofness(
          MechanismKind::kLocalityRestricted, inst, r, a.id, 1000);
      for (const ManipulationReport& m : res.profitable) {
        any = true;
        if (!m.deviation.preferences) locality_only = true;
      }
    }
    out.manipulable += any ? 1 : 0;
    out.locality_only_manipulable += locality_only ? 1 : 0;
    const Matching alg2 = LocalityRestricted(inst, r, {}).matching;
    const Matching sd = SerialDictatorship(inst, r).matching;
    if (CheckDominance(alg2, sd, inst).outcome ==
        DominanceOutcome::kDominates) {
      ++out.alg2_dominates_sd;
    }
  }
  return out;
}

CriterionResult LocalityMechanismManipulable(const RandomSweep& sweep) {
  const Instance e44 = LoadInstance(Fixture("ex44.json"));
  const auto res = CheckStrategyProofness(
      MechanismKind::kLocalityRestricted, e44,
      ExplicitPriority(e44, Order("ji")), A("j"), 1000);
  const bool example = !res.profitable.empty();
  return {example && sweep.manipulable > 0,
          std::string("example ") + (example ? "manipulable" : "NOT manipulable") +
              "; " + std::to_string(sweep.manipulable) + "/" +
              std::to_string(sweep.instances) +
              " random instances manipulable (" +
              std::to_string(sweep.locality_only_manipulable) +
              " by a locality report alone)"};
}

CriterionResult DominanceAsymmetry(const RandomSweep& sweep) {
  return {sweep.alg2_dominates_sd == 0 && sweep.instances == 1000,
          "locality outcome dominates pooled outcome " +
              std::to_string(sweep.alg2_dominates_sd) + " times in " +
              std::to_string(sweep.instances)};
}

CriterionResult ResourceMonotonicity() {
  int runs = 0, violations = 0;
  for (const auto& prefs : AllProfiles(3, 3)) {
    const Instance before = IndexedInstance(prefs, 3);
    for (int code = 0; code < 64; ++code) {
      // Insert new option 3 at position code / 4^a % 4 of agent a's list.
      auto extended = prefs;
      int c = code;
      for (auto& list : extended) {
        list.insert(list.begin() + c % 4, 3);
        c /= 4;
      }
      const Instance after = IndexedInstance(extended, 4);
      for (const auto& order : AllPermutations(3)) {
        const Matching x =
            SerialDictatorship(before, IndexedRanking(before, order)).matching;
        const Matching y =
            SerialDictatorship(after, IndexedRanking(after, order)).matching;
        ++runs;
        for (const Agent& a : after.agents) {
          if (Prefers(a, y.at(a.id), x.at(a.id)) ==
              Preference::kStrictlyWorse) {
            ++violations;
          }
        }
      }
    }
  }
  return {violations == 0 && runs == 216 * 64 * 6,
          std::to_string(violations) + " violations over " +
              std::to_string(runs) + " runs"};
}

CriterionResult ExpectedUtilityOracle() {
  std::mt19937_64 rng(5150);
  double worst_exact = 0.0;
  int cases = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 5;
    const int m = 1 + static_cast<int>(rng() % 5);
    auto prefs = ::havenmatch::testing::RandomProfile(rng, n, m);
    for (auto& list : prefs) list.resize(rng() % (m + 1));
    const Instance inst = IndexedInstance(prefs, m);
    const auto orders = AllPermutations(n);
    for (int a = 0; a < n; ++a) {
      double sum = 0.0;
      for (const auto& order : orders) {
        const int got = OracleSerialDictatorship(prefs, m, order)[a];
        if (got < 0) continue;
        const auto rank = std::find(prefs[a].begin(), prefs[a].end(), got) -
                          prefs[a].begin();
        sum += m - static_cast<double>(rank);
      }
      const double oracle = sum / static_cast<double>(orders.size());
      const double exact = ExpectedUtility(inst, inst.agents[a].id, {},
                                           ExhaustivePriorityOrders{});
      worst_exact = std::max(worst_exact, std::abs(exact - oracle));
      ++cases;
    }
  }

  double worst_mc = 0.0;
  int mc_cases = 0;
  std::vector<Instance> mc_instances{LoadInstance(Fixture("ex312b.json")),
                                     LoadInstance(Fixture("ex313.json"))};
  for (int k = 0; k < 3; ++k) {
    mc_instances.push_back(
        IndexedInstance(::havenmatch::testing::RandomProfile(rng, 5, 5), 5));
  }
  std::uint64_t seed = 1;
  for (const Instance& inst : mc_instances) {
    for (const Agent& a : inst.agents) {
      const double exact =
          ExpectedUtility(inst, a.id, {}, ExhaustivePriorityOrders{});
      const double mc = ExpectedUtility(inst, a.id, {},
                                        MonteCarloSeeded{100'000, seed++});
      worst_mc = std::max(worst_mc, std::abs(mc - exact));
      ++mc_cases;
    }
  }
  std::ostringstream d;
  d << "max |exhaustive - oracle| = " << worst_exact << " over " << cases
    << " agents; max |monte carlo - exhaustive| = " << worst_mc << " over "
    << mc_cases << " agents";
  return {worst_exact <= 1e-12 && worst_mc <= 0.02, d.str()};
}

CriterionResult DeterminismAndReplay() {
  namespace fs = std::filesystem;
  Checks c;
  std::size_t n = 0;
  const fs::path log_path = fs::temp_directory_path() /
                            ("havenmatch_acceptance_" +
                             std::to_string(::getpid()) + ".jsonl");
  fs::remove(log_path);
  {
    RoundLog log(log_path);
    std::mt19937_64 rng(99);
    for (int t = 0; t < 200; ++t) {
      const Instance inst = RandomTwoProviderInstance(rng, 1 + t % 6, 4);
      const std::uint64_t seed = rng();
      const PriorityRanking r = ComputePriority(inst, PriorityWeights{}, seed);
      const MechanismKind kind = t % 2 == 0
                                     ? MechanismKind::kSerialDictatorship
                                     : MechanismKind::kLocalityRestricted;
      const RoundResult result = RunMechanism(kind, inst, r);
      log.Append(MakeRoundRecord(log.next_round_id(), kind, inst, r, {}, {},
                                 result));
      ++n, c.Expect(ComputePriority(inst, PriorityWeights{}, seed) == r,
                    "ranking not reproducible");
    }
  }
  const auto records = ReadRoundLog(log_path);
  ++n, c.Expect(records.size() == 200, "log holds every round");
  for (const RoundRecord& rec : records) {
    ++n, c.Expect(ReplayMatches(rec),
                  "round " + std::to_string(rec.round_id) + " replays");
    ++n, c.Expect(InstanceDigest(rec.instance) == rec.instance_digest,
                  "digest of round " + std::to_string(rec.round_id));
  }
  fs::remove(log_path);

  // Frozen across builds: all-tie roster, seed 7.
  const Instance tie = IndexedInstance({{0}, {0}, {0}, {0}, {0}}, 1);
  const PriorityRanking frozen = ComputePriority(tie, PriorityWeights{}, 7);
  std::string order;
  for (const AgentId& id : frozen.order) order += id.str() + " ";
  ++n, c.Expect(order == "g4 g3 g2 g0 g1 ", "seed 7 order changed: " + order);
  return {c.ok(), Summarize(c, n)};
}

}  // namespace
}  // namespace havenmatch

int main() {
  using namespace havenmatch;
  Report("worked-example fixture suite", WorkedExamples);
  Report("serial dictatorship is Pareto optimal, n=m=3", ParetoAtDeskScale);
  Report("serial dictatorship is strategy-proof, n=m=3", StrategyProofAtDeskScale);
  const auto sweep_start = Clock::now();
  const RandomSweep sweep = SweepRandomTwoProviderInstances();
  std::cout << "      random 2-provider sweep took " << Seconds(sweep_start)
            << " s" << std::endl;
  Report("locality mechanism is manipulable",
         [&] { return LocalityMechanismManipulable(sweep); });
  Report("dominance asymmetry", [&] { return DominanceAsymmetry(sweep); });
  Report("resource monotonicity, n=m=3", ResourceMonotonicity);
  Report("expected-utility oracle", ExpectedUtilityOracle);
  Report("determinism and replay", DeterminismAndReplay);
  if (failed == 0) {
    std::cout << "all criteria passed" << std::endl;
  } else {
    std::cout << failed << " criteria failed" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
