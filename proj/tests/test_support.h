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

// Test-only helpers: instance builders and an index-based serial dictatorship
// used as an oracle independent of the library's implementation.

#ifndef HAVENMATCH_TESTS_TEST_SUPPORT_H_
#define HAVENMATCH_TESTS_TEST_SUPPORT_H_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "havenmatch/model.h"
#include "havenmatch/priority.h"

namespace havenmatch::testing {

#ifndef HAVENMATCH_FIXTURE_DIR
#error "HAVENMATCH_FIXTURE_DIR must be defined"
#endif

inline std::string Fixture(const std::string& name) {
  return std::string(HAVENMATCH_FIXTURE_DIR) + "/" + name;
}

inline AgentId A(const std::string& s) { return AgentId(s); }
inline OptionId O(const std::string& s) { return OptionId(s); }
inline ProviderId P(const std::string& s) { return ProviderId(s); }

inline std::vector<OptionId> Prefs(const std::string& letters) {
  std::vector<OptionId> out;
  for (char c : letters) out.emplace_back(std::string(1, c));
  return out;
}

inline std::vector<AgentId> Order(const std::string& letters) {
  std::vector<AgentId> out;
  for (char c : letters) out.emplace_back(std::string(1, c));
  return out;
}

inline Matching MakeMatching(
    std::initializer_list<std::pair<const char*, const char*>> entries) {
  Matching m;
  for (const auto& [agent, option] : entries) {
    m.Assign(AgentId(agent), option ? Outcome(OptionId(option)) : kOutside);
  }
  return m;
}

// Single-provider instance over options o0..o{m-1}. prefs[a] lists option
// indices, most preferred first.
inline Instance IndexedInstance(const std::vector<std::vector<int>>& prefs,
                                int num_options) {
  Instance inst;
  inst.providers.push_back({ProviderId("H"), "central"});
  for (int k = 0; k < num_options; ++k) {
    inst.options.push_back({OptionId("o" + std::to_string(k)), ProviderId("H"),
                            {}});
  }
  for (std::size_t a = 0; a < prefs.size(); ++a) {
    Agent agent;
    agent.id = AgentId("g" + std::to_string(a));
    agent.locality = "central";
    for (int k : prefs[a]) {
      agent.preferences.emplace_back("o" + std::to_string(k));
    }
    inst.agents.push_back(std::move(agent));
  }
  return inst;
}

inline PriorityRanking IndexedRanking(const Instance& inst,
                                      const std::vector<int>& order) {
  std::vector<AgentId> ids;
  for (int a : order) ids.push_back(inst.agents[a].id);
  return ExplicitPriority(inst, ids);
}

// Oracle: result[a] is the option index agent a receives, -1 for outside.
inline std::vector<int> OracleSerialDictatorship(
    const std::vector<std::vector<int>>& prefs, int num_options,
    const std::vector<int>& order) {
  std::vector<int> result(prefs.size(), -1);
  std::vector<bool> taken(num_options, false);
  for (int a : order) {
    for (int k : prefs[a]) {
      if (!taken[k]) {
        taken[k] = true;
        result[a] = k;
        break;
      }
    }
  }
  return result;
}

inline std::vector<std::vector<int>> AllPermutations(int m) {
  std::vector<int> p(m);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Every profile of strict full preference lists for n agents over m options.
inline std::vector<std::vector<std::vector<int>>> AllProfiles(int n, int m) {
  const auto perms = AllPermutations(m);
  std::vector<std::vector<std::vector<int>>> out{{}};
  for (int a = 0; a < n; ++a) {
    std::vector<std::vector<std::vector<int>>> next;
    for (const auto& partial : out) {
      for (const auto& p : perms) {
        auto extended = partial;
        extended.push_back(p);
        next.push_back(std::move(extended));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline std::vector<std::vector<int>> RandomProfile(std::mt19937_64& rng, int n,
                                                   int m) {
  std::vector<std::vector<int>> prefs(n);
  for (auto& list : prefs) {
    list.resize(m);
    std::iota(list.begin(), list.end(), 0);
    std::shuffle(list.begin(), list.end(), rng);
  }
  return prefs;
}

// Two providers P (locality "north") and Q ("south") splitting options
// o0..o{m-1}; agents get random full lists and random localities.
inline Instance RandomTwoProviderInstance(std::mt19937_64& rng, int n, int m) {
  Instance inst = IndexedInstance(RandomProfile(rng, n, m), m);
  inst.providers = {{ProviderId("P"), "north"}, {ProviderId("Q"), "south"}};
  std::uniform_int_distribution<int> split(1, m - 1);
  const int cut = split(rng);
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  for (int r = 0; r < m; ++r) {
    inst.options[idx[r]].provider = ProviderId(r < cut ? "P" : "Q");
  }
  std::bernoulli_distribution coin(0.5);
  for (Agent& a : inst.agents) a.locality = coin(rng) ? "north" : "south";
  return inst;
}

inline PriorityRanking RandomRanking(std::mt19937_64& rng,
                                     const Instance& inst) {
  std::vector<int> order(inst.agents.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  return IndexedRanking(inst, order);
}

}  // namespace havenmatch::testing

#endif  // HAVENMATCH_TESTS_TEST_SUPPORT_H_
