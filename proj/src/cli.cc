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

#include "havenmatch/cli.h"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "havenmatch/analysis.h"
#include "havenmatch/error.h"
#include "havenmatch/instance_io.h"
#include "havenmatch/json_codec.h"
#include "havenmatch/mechanism.h"
#include "havenmatch/priority.h"
#include "havenmatch/round_log.h"
#include "havenmatch/service.h"

namespace havenmatch {

namespace {

constexpr std::size_t kDefaultFuzzBudget = 1000;
constexpr const char* kDefaultAddress = "127.0.0.1:8080";
constexpr const char* kDefaultLog = "havenmatch_rounds.jsonl";

struct CliConfig {
  std::string instance;
  std::string mechanism = "sd";
  std::uint64_t seed = 0;
  std::string weights;
  std::string priority_order;
  std::vector<std::string> routes;
  std::string deviator;
  std::uint64_t budget = 0;
  std::string log;
  std::uint64_t round = 0;
  std::string matching;
  std::string format = "text";
  std::string out;
  std::size_t samples = 0;
  std::string agent;
  std::string merge_chain;
  std::vector<std::string> utilities;
  std::string addr;

  // Set after parsing for options whose absence matters.
  bool has_seed = false;
  bool has_budget = false;
  bool has_round = false;
  bool has_samples = false;

  bool json() const { return format == "json"; }
  MechanismKind kind() const { return *ParseMechanism(mechanism); }
};

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIoError:
      return kExitIo;
    case ErrorCode::kBudgetExceeded:
      return kExitBudgetExceeded;
    default:
      return kExitInvalid;
  }
}

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

PriorityWeights ParseWeights(const std::string& text) {
  const auto parts = Split(text, ',');
  auto bad = [&] {
    return Error(ErrorCode::kParseError,
                 "--weights expects three numbers wf,wh,ww, got '" + text + "'");
  };
  if (parts.size() != 3) throw bad();
  double w[3];
  for (int k = 0; k < 3; ++k) {
    std::size_t used = 0;
    try {
      w[k] = std::stod(parts[k], &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != parts[k].size()) throw bad();
  }
  return PriorityWeights{w[0], w[1], w[2]};
}

// Precedence: --priority-order, then --weights/--seed, then the document's
// priority, then default weights with seed 0.
PriorityRanking ResolveRanking(const CliConfig& c, const InstanceDocument& doc) {
  const Instance& inst = doc.instance;
  if (!c.priority_order.empty()) {
    std::vector<AgentId> order;
    for (const std::string& id : Split(c.priority_order, ',')) {
      order.emplace_back(id);
    }
    return ExplicitPriority(inst, order);
  }
  const WeightedPriority* doc_weighted =
      doc.priority ? std::get_if<WeightedPriority>(&*doc.priority) : nullptr;
  if (!c.weights.empty() || c.has_seed) {
    PriorityWeights weights = doc_weighted ? doc_weighted->weights
                                           : PriorityWeights{};
    if (!c.weights.empty()) weights = ParseWeights(c.weights);
    std::uint64_t seed = doc_weighted ? doc_weighted->seed : 0;
    if (c.has_seed) seed = c.seed;
    return ComputePriority(inst, weights, seed);
  }
  if (doc.priority) return BuildRanking(inst, *doc.priority);
  return ComputePriority(inst, PriorityWeights{}, 0);
}

RoutingPolicy ResolveRouting(const CliConfig& c, const Instance& inst) {
  RoutingPolicy policy;
  for (const std::string& route : c.routes) {
    const auto eq = route.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == route.size()) {
      throw Error(ErrorCode::kParseError,
                  "--route expects agent=provider, got '" + route + "'");
    }
    policy.overrides[AgentId(route.substr(0, eq))] =
        ProviderId(route.substr(eq + 1));
  }
  ValidatePolicy(policy, inst);
  return policy;
}

// "P|Q;P+Q": groupings separated by ';', groups by '|', providers by '+'.
std::vector<ProviderGrouping> ParseMergeChain(const std::string& text) {
  std::vector<ProviderGrouping> chain;
  for (const std::string& grouping_text : Split(text, ';')) {
    ProviderGrouping grouping;
    for (const std::string& group_text : Split(grouping_text, '|')) {
      ProviderGroup group;
      for (const std::string& id : Split(group_text, '+')) {
        if (!id.empty()) group.emplace_back(id);
      }
      grouping.push_back(std::move(group));
    }
    chain.push_back(std::move(grouping));
  }
  return chain;
}

// "OPTION=VALUE" entries for one agent; OPTION "Outside" is the outside option.
UtilityModel ParseUtilities(const AgentId& agent,
                            const std::vector<std::string>& entries) {
  UtilityModel model;
  for (const std::string& entry : entries) {
    const auto eq = entry.rfind('=');
    std::size_t used = 0;
    double value = 0.0;
    try {
      if (eq == std::string::npos || eq == 0) throw std::invalid_argument("");
      value = std::stod(entry.substr(eq + 1), &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != entry.size() - eq - 1) {
      throw Error(ErrorCode::kParseError,
                  "--utility expects OPTION=VALUE, got '" + entry + "'");
    }
    const std::string option = entry.substr(0, eq);
    model.Set(agent, option == "Outside" ? kOutside : Outcome(OptionId(option)),
              value);
  }
  return model;
}

// ---------------------------------------------------------------------------
// Text rendering

std::string Join(const std::vector<std::string>& items,
                 const std::string& sep) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k > 0) out += sep;
    out += items[k];
  }
  return out;
}

template <typename Id>
std::string JoinIds(const std::vector<Id>& ids, const std::string& sep) {
  std::vector<std::string> items;
  for (const Id& id : ids) items.push_back(id.str());
  return Join(items, sep);
}

std::string GroupingLabel(const ProviderGrouping& grouping) {
  std::vector<std::string> groups;
  for (const ProviderGroup& g : grouping) {
    groups.push_back("{" + JoinIds(g, ", ") + "}");
  }
  return Join(groups, " ");
}

void WriteMatching(std::ostream& os, const Instance& inst, const Matching& m,
                   const std::string& indent = "") {
  for (const Agent& a : inst.agents) {
    if (!m.contains(a.id)) continue;
    os << indent << a.id.str() << " -> " << OutcomeLabel(m.at(a.id)) << '\n';
  }
}

void WriteTrace(std::ostream& os, const RoundTrace& trace) {
  os << "trace:\n";
  for (std::size_t t = 0; t < trace.size(); ++t) {
    const TraceStep& s = trace[t];
    os << "  " << t + 1 << "  " << s.agent.str() << "  {"
       << JoinIds(s.available, ", ") << "} -> " << OutcomeLabel(s.chosen)
       << '\n';
  }
}

std::string DeviationLabel(const Deviation& d) {
  std::vector<std::string> parts;
  if (d.preferences) parts.push_back("preferences " + JoinIds(*d.preferences, ">"));
  if (d.locality) parts.push_back("locality " + *d.locality);
  return parts.empty() ? "truthful report" : Join(parts, ", ");
}

Json RoundJson(const RoundResult& result, const PriorityRanking& ranking,
               MechanismKind kind, const Instance& inst) {
  return Json{{"mechanism", MechanismName(kind)},
              {"instance_digest", InstanceDigest(inst)},
              {"ranking", ranking},
              {"matching", result.matching},
              {"trace", result.trace}};
}

// ---------------------------------------------------------------------------
// Subcommands

int CmdRun(const CliConfig& c, std::ostream& os) {
  const InstanceDocument doc = LoadDocument(c.instance);
  const Instance& inst = doc.instance;
  const PriorityRanking ranking = ResolveRanking(c, doc);
  const RoutingPolicy routing = ResolveRouting(c, inst);
  const RoundResult result = RunMechanism(c.kind(), inst, ranking, routing);

  std::optional<std::uint64_t> round_id;
  if (!c.log.empty()) {
    RoundLog log(c.log);
    const RoundRecord record = MakeRoundRecord(
        log.next_round_id(), c.kind(), inst, ranking, routing, {}, result);
    log.Append(record);
    round_id = record.round_id;
  }

  if (c.json()) {
    Json j = RoundJson(result, ranking, c.kind(), inst);
    if (round_id) j["round_id"] = *round_id;
    os << j.dump(2) << '\n';
    return kExitOk;
  }
  if (round_id) os << "round: " << *round_id << '\n';
  os << "mechanism: " << MechanismName(c.kind()) << '\n';
  os << "queue: " << JoinIds(ranking.order, ", ") << '\n';
  WriteMatching(os, inst, result.matching);
  WriteTrace(os, result.trace);
  return kExitOk;
}

int CmdAudit(const CliConfig& c, std::ostream& os) {
  Instance inst;
  Matching matching;
  if (c.has_round) {
    if (c.log.empty()) {
      throw Error(ErrorCode::kParseError, "--round requires --log");
    }
    const auto record = RoundLog(c.log).Find(c.round);
    if (!record) {
      throw Error(ErrorCode::kInvalidRoundId,
                  "round " + std::to_string(c.round) + " is not in " + c.log);
    }
    inst = record->instance;
    matching = record->matching;
  } else {
    if (c.instance.empty()) {
      throw Error(ErrorCode::kParseError,
                  "audit needs --instance, or --log with --round");
    }
    const InstanceDocument doc = LoadDocument(c.instance);
    inst = doc.instance;
    if (!c.matching.empty()) {
      try {
        matching = Json::parse(ReadFile(c.matching)).get<Matching>();
      } catch (const Json::exception& e) {
        throw Error(ErrorCode::kParseError,
                    c.matching + ": malformed matching: " + e.what());
      }
    } else {
      matching = RunMechanism(c.kind(), inst, ResolveRanking(c, doc),
                              ResolveRouting(c, inst))
                     .matching;
    }
  }

  const ParetoVerdict verdict = IsParetoOptimal(
      matching, inst, c.has_budget ? c.budget : kDefaultOracleBudget);
  if (c.json()) {
    Json j = verdict;
    j["matching"] = matching;
    os << j.dump(2) << '\n';
  } else {
    os << "matching:\n";
    WriteMatching(os, inst, matching, "  ");
    os << "pareto optimal: " << (verdict.optimal ? "yes" : "no") << '\n';
    if (verdict.witness) {
      os << "witness:\n";
      WriteMatching(os, inst, *verdict.witness, "  ");
    }
    os << "candidates examined: " << verdict.candidates << '\n';
  }
  return verdict.optimal ? kExitOk : kExitPropertyViolated;
}

int CmdFuzz(const CliConfig& c, std::ostream& os) {
  const InstanceDocument doc = LoadDocument(c.instance);
  const Instance& inst = doc.instance;
  const PriorityRanking ranking = ResolveRanking(c, doc);
  const RoutingPolicy routing = ResolveRouting(c, inst);
  std::vector<AgentId> deviators;
  if (!c.deviator.empty()) {
    deviators.emplace_back(c.deviator);
  } else {
    for (const Agent& a : inst.agents) deviators.push_back(a.id);
  }

  std::vector<StrategyProofnessResult> results;
  std::size_t profitable = 0;
  for (const AgentId& agent : deviators) {
    results.push_back(CheckStrategyProofness(
        c.kind(), inst, ranking, agent,
        c.has_budget ? c.budget : kDefaultFuzzBudget, routing, c.seed));
    profitable += results.back().profitable.size();
  }

  if (c.json()) {
    os << Json{{"mechanism", MechanismName(c.kind())},
               {"ranking", ranking},
               {"results", results},
               {"profitable_count", profitable}}
              .dump(2)
       << '\n';
  } else {
    os << "mechanism: " << MechanismName(c.kind()) << '\n';
    os << "queue: " << JoinIds(ranking.order, ", ") << '\n';
    for (const StrategyProofnessResult& r : results) {
      os << r.deviator.str() << ": truthful " << OutcomeLabel(r.truthful_outcome)
         << ", " << r.deviations_tried << " deviations tried"
         << (r.exhaustive ? "" : " (sampled)") << ", "
         << r.profitable.size() << " profitable\n";
      for (const ManipulationReport& m : r.profitable) {
        os << "  " << DeviationLabel(m.deviation) << " -> "
           << OutcomeLabel(m.deviant_outcome) << '\n';
      }
    }
    os << "profitable manipulations: " << profitable << '\n';
  }
  return profitable > 0 ? kExitPropertyViolated : kExitOk;
}

int CmdCompare(const CliConfig& c, std::ostream& os) {
  const InstanceDocument doc = LoadDocument(c.instance);
  const Instance& inst = doc.instance;
  const PriorityRanking ranking = ResolveRanking(c, doc);
  const MechanismComparison cmp =
      CompareMechanisms(inst, ranking, ResolveRouting(c, inst));
  if (c.json()) {
    os << Json{{"verdict", cmp.verdict},
               {"ranking", ranking},
               {"serial_dictatorship", cmp.serial_dictatorship.matching},
               {"locality_restricted", cmp.locality_restricted.matching}}
              .dump(2)
       << '\n';
    return kExitOk;
  }
  auto ids = [](const std::vector<AgentId>& v) {
    return v.empty() ? std::string("-") : JoinIds(v, ", ");
  };
  os << "verdict: " << DominanceOutcomeName(cmp.verdict.outcome) << '\n';
  os << "better under sd: " << ids(cmp.verdict.improving) << '\n';
  os << "worse under sd: " << ids(cmp.verdict.worsening) << '\n';
  os << "sd:\n";
  WriteMatching(os, inst, cmp.serial_dictatorship.matching, "  ");
  os << "locality:\n";
  WriteMatching(os, inst, cmp.locality_restricted.matching, "  ");
  return kExitOk;
}

int CmdUtility(const CliConfig& c, std::ostream& os) {
  const Instance inst = LoadInstance(c.instance);
  const AgentId agent(c.agent);
  const UtilityModel model = ParseUtilities(agent, c.utilities);
  PrioritySampler sampler = ExhaustivePriorityOrders{};
  if (c.has_samples) sampler = MonteCarloSeeded{c.samples, c.seed};

  std::vector<ExpansionRow> rows;
  if (!c.merge_chain.empty()) {
    rows = LocalityExpansionReport(inst, agent, ParseMergeChain(c.merge_chain),
                                   model, sampler, ResolveRouting(c, inst));
  } else {
    ProviderGroup all;
    for (const Provider& p : inst.providers) all.push_back(p.id);
    rows.push_back(
        {{all}, ExpectedUtility(inst, agent, model, sampler)});
  }

  if (c.json()) {
    Json j{{"agent", agent}, {"rows", rows}};
    j["sampler"] = c.has_samples
                       ? Json{{"samples", c.samples}, {"seed", c.seed}}
                       : Json("exhaustive");
    os << j.dump(2) << '\n';
    return kExitOk;
  }
  os << "agent: " << agent.str() << '\n';
  os << "sampler: "
     << (c.has_samples ? "monte carlo, " + std::to_string(c.samples) +
                             " samples, seed " + std::to_string(c.seed)
                       : std::string("exhaustive"))
     << '\n';
  std::size_t width = 8;
  for (const ExpansionRow& r : rows) {
    width = std::max(width, GroupingLabel(r.grouping).size());
  }
  os << std::left << std::setw(static_cast<int>(width) + 2) << "grouping"
     << "U\n";
  for (const ExpansionRow& r : rows) {
    os << std::left << std::setw(static_cast<int>(width) + 2)
       << GroupingLabel(r.grouping) << std::setprecision(12)
       << r.expected_utility << '\n';
  }
  return kExitOk;
}

int CmdServe(const CliConfig& c, std::ostream& err) {
  SessionOptions options;
  options.log_path = c.log.empty() ? kDefaultLog : c.log;
  if (!c.weights.empty()) options.weights = ParseWeights(c.weights);
  options.seed = c.seed;
  if (c.has_budget) options.audit_budget = c.budget;
  Session session(options);
  if (!c.instance.empty()) {
    const HttpResponse r = session.PutInstance(ReadFile(c.instance));
    if (r.status != 200) {
      err << "havenmatch: " << c.instance << ": "
          << r.body.value("message", std::string("rejected")) << '\n';
      return kExitInvalid;
    }
  }
  std::string address = c.addr;
  if (address.empty()) {
    const char* env = std::getenv("HAVENMATCH_ADDR");
    address = env != nullptr && *env != '\0' ? env : kDefaultAddress;
  }
  const auto [host, port] = ParseListenAddress(address);
  HttpService service(session);
  const int bound = service.Bind(host, port);
  err << "havenmatch: listening on " << host << ':' << bound << ", log "
      << options.log_path.string() << '\n';
  service.Listen();
  return kExitOk;
}

// ---------------------------------------------------------------------------

void AddPriorityFlags(CLI::App* cmd, CliConfig& c) {
  cmd->add_option("--seed", c.seed, "Tie-break seed (Monte Carlo seed for utility)");
  cmd->add_option("--weights", c.weights, "Priority weights wf,wh,ww");
  cmd->add_option("--priority-order", c.priority_order,
                  "Explicit serving order, e.g. i,j,k");
}

void AddOutputFlags(CLI::App* cmd, CliConfig& c) {
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--out", c.out, "Write output to this file");
}

void AddMechanismFlags(CLI::App* cmd, CliConfig& c) {
  cmd->add_option("--mechanism", c.mechanism, "sd or locality")
      ->check(CLI::IsMember({"sd", "locality"}));
  cmd->add_option("--route", c.routes,
                  "Routing override agent=provider (repeatable)");
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CliConfig c;
  CLI::App app{"Housing allocation clearinghouse", "havenmatch"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "Run one assignment round");
  run->add_option("--instance", c.instance, "Instance document")->required();
  AddMechanismFlags(run, c);
  AddPriorityFlags(run, c);
  run->add_option("--log", c.log, "Append the round to this log");
  AddOutputFlags(run, c);

  CLI::App* audit =
      app.add_subcommand("audit", "Check a matching for Pareto optimality");
  audit->add_option("--instance", c.instance, "Instance document");
  audit->add_option("--matching", c.matching, "Matching to audit (JSON)");
  audit->add_option("--log", c.log, "Round log");
  audit->add_option("--round", c.round, "Logged round to audit");
  audit->add_option("--budget", c.budget, "Maximum feasible matchings");
  AddMechanismFlags(audit, c);
  AddPriorityFlags(audit, c);
  AddOutputFlags(audit, c);

  CLI::App* fuzz =
      app.add_subcommand("fuzz", "Search for profitable misreports");
  fuzz->add_option("--instance", c.instance, "Instance document")->required();
  fuzz->add_option("--deviator", c.deviator, "Only this agent deviates");
  fuzz->add_option("--budget", c.budget,
                   "Sampled permutations for long preference lists");
  AddMechanismFlags(fuzz, c);
  AddPriorityFlags(fuzz, c);
  AddOutputFlags(fuzz, c);

  CLI::App* compare =
      app.add_subcommand("compare", "Compare sd against locality");
  compare->add_option("--instance", c.instance, "Instance document")
      ->required();
  compare->add_option("--route", c.routes,
                      "Routing override agent=provider (repeatable)");
  AddPriorityFlags(compare, c);
  AddOutputFlags(compare, c);

  CLI::App* utility = app.add_subcommand(
      "utility", "Expected utility under uniformly random priority");
  utility->add_option("--instance", c.instance, "Instance document")
      ->required();
  utility->add_option("--agent", c.agent, "Agent to evaluate")->required();
  utility->add_option("--samples", c.samples,
                      "Monte Carlo samples (default: all orders)");
  utility->add_option("--seed", c.seed, "Monte Carlo seed");
  utility->add_option("--merge-chain", c.merge_chain,
                      "Provider groupings, e.g. 'P|Q;P+Q'");
  utility->add_option("--utility", c.utilities,
                      "Utility override OPTION=VALUE (repeatable)");
  utility->add_option("--route", c.routes,
                      "Routing override agent=provider (repeatable)");
  AddOutputFlags(utility, c);

  CLI::App* serve = app.add_subcommand("serve", "Start the HTTP service");
  serve->add_option("--addr", c.addr,
                    "host:port (default $HAVENMATCH_ADDR or 127.0.0.1:8080)");
  serve->add_option("--log", c.log, "Round log");
  serve->add_option("--instance", c.instance, "Instance to preload");
  serve->add_option("--weights", c.weights, "Default priority weights");
  serve->add_option("--seed", c.seed, "Default tie-break seed");
  serve->add_option("--budget", c.budget, "Audit oracle budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  CLI::App* cmd = app.get_subcommands().front();
  auto given = [cmd](const char* name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  c.has_seed = given("--seed");
  c.has_budget = given("--budget");
  c.has_round = given("--round");
  c.has_samples = given("--samples");

  std::ostringstream buffer;
  int code = kExitOk;
  try {
    const std::string name = cmd->get_name();
    if (name == "run") code = CmdRun(c, buffer);
    if (name == "audit") code = CmdAudit(c, buffer);
    if (name == "fuzz") code = CmdFuzz(c, buffer);
    if (name == "compare") code = CmdCompare(c, buffer);
    if (name == "utility") code = CmdUtility(c, buffer);
    if (name == "serve") return CmdServe(c, err);
  } catch (const ValidationError& e) {
    err << "havenmatch: invalid instance: " << e.what() << '\n';
    for (const Violation& v : e.violations()) {
      err << "  " << v.entity << ' ' << v.entity_id << ' ' << v.field << ": "
          << v.rule << '\n';
    }
    return kExitInvalid;
  } catch (const Error& e) {
    err << "havenmatch: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const Json::exception& e) {
    err << "havenmatch: " << e.what() << '\n';
    return kExitInvalid;
  }

  if (!c.out.empty()) {
    std::ofstream file(c.out, std::ios::binary | std::ios::trunc);
    file << buffer.str();
    file.flush();
    if (!file) {
      err << "havenmatch: cannot write " << c.out << '\n';
      return kExitIo;
    }
  } else {
    out << buffer.str() << std::flush;
  }
  return code;
}

}  // namespace havenmatch
