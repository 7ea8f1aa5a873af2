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

#include <gtest/gtest.h>

#include <random>

#include "havenmatch/analysis.h"
#include "havenmatch/error.h"
#include "havenmatch/instance_io.h"
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
using ::havenmatch::testing::P;
using ::havenmatch::testing::Prefs;

RoundResult RunSd(const std::string& fixture, const std::string& order) {
  const Instance inst = LoadInstance(Fixture(fixture));
  return SerialDictatorship(inst, ExplicitPriority(inst, Order(order)));
}

TEST(SerialDictatorship, ProfileOne) {
  EXPECT_EQ(RunSd("ex312a.json", "ijk").matching,
            MakeMatching({{"i", "a"}, {"j", "b"}, {"k", "c"}}));
}

TEST(SerialDictatorship, ProfileTwo) {
  EXPECT_EQ(RunSd("ex312b.json", "ijk").matching,
            MakeMatching({{"i", "a"}, {"j", "c"}, {"k", "b"}}));
}

TEST(SerialDictatorship, MoreAgentsThanOptions) {
  EXPECT_EQ(RunSd("ex313.json", "ijkl").matching,
            MakeMatching({{"i", "a"}, {"j", "b"}, {"k", "c"}, {"l", nullptr}}));
}

TEST(SerialDictatorship, MoreOptionsThanAgents) {
  Instance inst = IndexedInstance({{0, 1}}, 2);
  const RoundResult r = SerialDictatorship(inst, IndexedRanking(inst, {0}));
  EXPECT_EQ(r.matching.at(A("g0")), Outcome(O("o0")));
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].available,
            (std::vector<OptionId>{O("o0"), O("o1")}));
}

TEST(SerialDictatorship, TraceRecordsAvailableSets) {
  const RoundResult r = RunSd("ex312b.json", "ijk");
  ASSERT_EQ(r.trace.size(), 3u);
  EXPECT_EQ(r.trace[0].agent, A("i"));
  EXPECT_EQ(r.trace[0].available, Prefs("abc"));
  EXPECT_EQ(r.trace[1].available, Prefs("bc"));
  EXPECT_EQ(r.trace[1].chosen, Outcome(O("c")));
  EXPECT_EQ(r.trace[2].available, Prefs("b"));
}

TEST(SerialDictatorship, TruncatedListsNeverGetUnlistedOptions) {
  // g0 accepts only o0; g1 accepts only o0 too and must stay outside even
  // though o1 is free.
  Instance inst = IndexedInstance({{0}, {0}}, 2);
  const RoundResult r = SerialDictatorship(inst, IndexedRanking(inst, {0, 1}));
  EXPECT_EQ(r.matching.at(A("g0")), Outcome(O("o0")));
  EXPECT_EQ(r.matching.at(A("g1")), kOutside);

  Instance empty = IndexedInstance({{}}, 1);
  EXPECT_EQ(SerialDictatorship(empty, IndexedRanking(empty, {0}))
                .matching.at(A("g0")),
            kOutside);
}

TEST(SerialDictatorship, RejectsForeignRanking) {
  const Instance inst = LoadInstance(Fixture("ex312a.json"));
  PriorityRanking partial;
  partial.order = Order("ij");
  try {
    SerialDictatorship(inst, partial);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidRanking);
  }
  partial.order = Order("ijkq");
  EXPECT_THROW(SerialDictatorship(inst, partial), Error);
}

// Agrees with the index-based oracle on every 3x3 profile and order, and on
// unbalanced sizes.
TEST(SerialDictatorship, MatchesOracleExhaustively) {
  for (auto [n, m] : {std::pair{3, 3}, {3, 2}, {2, 3}, {1, 3}, {3, 1}}) {
    for (const auto& prefs : AllProfiles(n, m)) {
      const Instance inst = IndexedInstance(prefs, m);
      for (const auto& order : AllPermutations(n)) {
        const RoundResult r =
            SerialDictatorship(inst, IndexedRanking(inst, order));
        const std::vector<int> want = OracleSerialDictatorship(prefs, m, order);
        for (int a = 0; a < n; ++a) {
          const Outcome expect =
              want[a] < 0 ? kOutside
                          : Outcome(O("o" + std::to_string(want[a])));
          ASSERT_EQ(r.matching.at(inst.agents[a].id), expect);
        }
        ASSERT_TRUE(ValidateMatching(r.matching, inst).empty());
      }
    }
  }
}

// Each step picks the agent's best option among those available at its turn,
// read off the trace alone.
TEST(SerialDictatorship, TraceStepsPickMaximalAvailable) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 5;
    const int m = 1 + (trial / 5) % 5;
    auto prefs = ::havenmatch::testing::RandomProfile(rng, n, m);
    for (auto& list : prefs) list.resize(rng() % (m + 1));  // truncate
    const Instance inst = IndexedInstance(prefs, m);
    const RoundResult r =
        SerialDictatorship(inst, ::havenmatch::testing::RandomRanking(rng, inst));
    for (const TraceStep& step : r.trace) {
      const Agent& agent = *inst.FindAgent(step.agent);
      Outcome best = kOutside;
      for (const OptionId& opt : step.available) {
        if (Prefers(agent, opt, best) == Preference::kStrictlyBetter) best = opt;
      }
      ASSERT_EQ(step.chosen, best);
      ASSERT_EQ(r.matching.at(step.agent), step.chosen);
    }
  }
}

// Adding one option, inserted anywhere in every agent's list, never makes any
// agent strictly worse off by their extended preferences.
TEST(SerialDictatorship, ResourceMonotoneUpToFourOptions) {
  std::size_t runs = 0;
  for (auto [n, m] : {std::pair{3, 3}, {4, 3}, {2, 3}, {3, 2}}) {
    for (const auto& prefs : AllProfiles(n, m)) {
      const Instance inst = IndexedInstance(prefs, m);
      // Profiles are exhaustive, so one order is enough once n = 4.
      const auto orders = n <= 3 ? AllPermutations(n)
                                 : std::vector<std::vector<int>>{{0, 1, 2, 3}};
      for (const auto& order : orders) {
        const RoundResult base =
            SerialDictatorship(inst, IndexedRanking(inst, order));
        // Every combination of insertion positions of the new option.
        std::vector<int> pos(n, 0);
        while (true) {
          auto extended = prefs;
          for (int a = 0; a < n; ++a) {
            extended[a].insert(extended[a].begin() + pos[a], m);
          }
          const Instance bigger = IndexedInstance(extended, m + 1);
          const RoundResult more =
              SerialDictatorship(bigger, IndexedRanking(bigger, order));
          for (const Agent& agent : bigger.agents) {
            ASSERT_NE(Prefers(agent, more.matching.at(agent.id),
                              base.matching.at(agent.id)),
                      Preference::kStrictlyWorse);
          }
          ++runs;
          int a = 0;
          while (a < n && ++pos[a] > m) pos[a++] = 0;
          if (a == n) break;
        }
      }
    }
  }
  EXPECT_GT(runs, 0u);
}

TEST(LocalityRestricted, SingleAgentRoutedToEitherProvider) {
  const Instance inst = LoadInstance(Fixture("ex431.json"));
  const PriorityRanking r = ExplicitPriority(inst, Order("i"));
  EXPECT_EQ(LocalityRestricted(inst, r, {}).matching.at(A("i")),
            Outcome(O("b")));
  EXPECT_EQ(LocalityRestricted(inst, r, {}, {{A("i"), "south"}})
                .matching.at(A("i")),
            Outcome(O("z")));

  RoutingPolicy to_q;
  to_q.overrides[A("i")] = P("Q");
  const RoundResult via_override = LocalityRestricted(inst, r, to_q);
  EXPECT_EQ(via_override.matching.at(A("i")), Outcome(O("z")));
  EXPECT_EQ(via_override.trace[0].available, Prefs("xz"));
}

TEST(LocalityRestricted, TwoAgentsTwoProviders) {
  const Instance inst = LoadInstance(Fixture("ex432.json"));
  const RoundResult r =
      LocalityRestricted(inst, ExplicitPriority(inst, Order("ij")), {});
  EXPECT_EQ(r.matching, MakeMatching({{"i", "b"}, {"j", "z"}}));
  EXPECT_EQ(r.trace[0].available, Prefs("abc"));
  EXPECT_EQ(r.trace[1].available, Prefs("xz"));
}

TEST(LocalityRestricted, RevisitedExampleTruthful) {
  const Instance inst = LoadInstance(Fixture("ex44.json"));
  EXPECT_EQ(LocalityRestricted(inst, ExplicitPriority(inst, Order("ij")), {})
                .matching,
            MakeMatching({{"i", "a"}, {"j", "x"}}));
}

TEST(LocalityRestricted, UnroutableAgentStaysOutside) {
  const Instance inst = LoadInstance(Fixture("ex431.json"));
  const RoundResult r = LocalityRestricted(
      inst, ExplicitPriority(inst, Order("i")), {}, {{A("i"), "east"}});
  EXPECT_EQ(r.matching.at(A("i")), kOutside);
  EXPECT_TRUE(r.trace[0].available.empty());
}

TEST(LocalityRestricted, SharedLocalityRoutesToSmallestProviderId) {
  Instance inst = LoadInstance(Fixture("ex431.json"));
  inst.providers[1].locality = "north";  // P and Q both serve north
  EXPECT_EQ(RouteAgent(inst, A("i"), "north", {}), std::optional(P("P")));
  EXPECT_EQ(LocalityRestricted(inst, ExplicitPriority(inst, Order("i")), {})
                .matching.at(A("i")),
            Outcome(O("b")));
}

TEST(LocalityRestricted, RejectsBadOverrides) {
  const Instance inst = LoadInstance(Fixture("ex431.json"));
  RoutingPolicy bad;
  bad.overrides[A("i")] = P("R");
  try {
    LocalityRestricted(inst, ExplicitPriority(inst, Order("i")), bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidPolicy);
  }
}

TEST(LocalityRestricted, PooledProvidersSeeMergedInventory) {
  const Instance inst = LoadInstance(Fixture("ex432.json"));
  const PriorityRanking r = ExplicitPriority(inst, Order("ij"));
  const RoundResult merged =
      LocalityRestricted(inst, r, {}, {}, {{P("P"), P("Q")}});
  EXPECT_EQ(merged, SerialDictatorship(inst, r));
  const RoundResult split =
      LocalityRestricted(inst, r, {}, {}, {{P("P")}, {P("Q")}});
  EXPECT_EQ(split, LocalityRestricted(inst, r, {}));
  EXPECT_THROW(LocalityRestricted(inst, r, {}, {}, {{P("P")}}), Error);
  EXPECT_THROW(LocalityRestricted(inst, r, {}, {}, {{P("P")}, {P("P"), P("Q")}}),
               Error);
}

// With a single provider holding every option, the baseline and serial
// dictatorship agree step for step.
TEST(LocalityRestricted, SingleProviderEqualsSerialDictatorship) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 1 + trial % 6;
    const int m = 1 + (trial / 6) % 6;
    const Instance inst =
        IndexedInstance(::havenmatch::testing::RandomProfile(rng, n, m), m);
    const PriorityRanking r = ::havenmatch::testing::RandomRanking(rng, inst);
    ASSERT_EQ(LocalityRestricted(inst, r, {}).trace,
              SerialDictatorship(inst, r).trace);
  }
}

TEST(Mechanism, NamesRoundTrip) {
  for (MechanismKind k :
       {MechanismKind::kSerialDictatorship, MechanismKind::kLocalityRestricted}) {
    EXPECT_EQ(ParseMechanism(MechanismName(k)), k);
  }
  EXPECT_FALSE(ParseMechanism("ttc").has_value());
}

}  // namespace
}  // namespace havenmatch
