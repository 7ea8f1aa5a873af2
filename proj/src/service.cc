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

#include "havenmatch/service.h"

#include <algorithm>
#include <charconv>
#include <mutex>
#include <system_error>
#include <variant>

#include "havenmatch/error.h"
#include "havenmatch/instance_io.h"
#include "havenmatch/mechanism.h"
#include "httplib.h"

namespace havenmatch {

namespace {

int StatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
      return 400;
    case ErrorCode::kBudgetExceeded:
      return 409;
    case ErrorCode::kIoError:
    case ErrorCode::kDigestMismatch:
    case ErrorCode::kInvalidRoundId:
      return 500;
    default:
      return 422;
  }
}

HttpResponse ErrorResponse(int status, std::string_view error,
                           const std::string& message) {
  return {status, Json{{"error", error}, {"message", message}}};
}

// Runs `f` and turns library exceptions into status codes.
template <typename F>
HttpResponse Guard(F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    HttpResponse r = ErrorResponse(422, ErrorCodeName(e.code()), e.what());
    r.body["violations"] = e.violations();
    return r;
  } catch (const Error& e) {
    return ErrorResponse(StatusFor(e.code()), ErrorCodeName(e.code()),
                         e.what());
  } catch (const Json::exception& e) {
    return ErrorResponse(400, ErrorCodeName(ErrorCode::kParseError), e.what());
  }
}

Json ParseBody(const std::string& body) {
  try {
    Json j = Json::parse(body);
    if (!j.is_object()) {
      throw Error(ErrorCode::kParseError, "request body must be a JSON object");
    }
    return j;
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParseError,
                std::string("request body is not JSON: ") + e.what());
  }
}

bool Present(const Json& j, const char* key) {
  return j.contains(key) && !j.at(key).is_null();
}

MechanismKind MechanismField(const Json& j, MechanismKind fallback) {
  if (!Present(j, "mechanism")) return fallback;
  const auto kind = ParseMechanism(j.at("mechanism").get<std::string>());
  if (!kind) {
    throw Error(ErrorCode::kParseError,
                "mechanism must be \"sd\" or \"locality\"");
  }
  return *kind;
}

RoutingPolicy RoutingField(const Json& j) {
  return Present(j, "routing") ? j.at("routing").get<RoutingPolicy>()
                               : RoutingPolicy{};
}

HttpResponse NoInstance() {
  return ErrorResponse(409, "NoInstance", "no instance has been loaded");
}

HttpResponse RoundNotFound(std::uint64_t round_id) {
  return ErrorResponse(404, "NotFound",
                       "no round " + std::to_string(round_id) + " in the log");
}

Json Summary(const InstanceDocument& doc) {
  return Json{{"digest", InstanceDigest(doc.instance)},
              {"num_agents", doc.instance.num_agents()},
              {"num_options", doc.instance.num_options()}};
}

}  // namespace

Session::Session(SessionOptions options)
    : options_(std::move(options)), log_(options_.log_path) {}

PriorityRanking Session::ResolveRanking(const Json& request) const {
  const Instance& inst = document_->instance;
  if (Present(request, "priority")) {
    return BuildRanking(inst, request.at("priority").get<PrioritySpec>());
  }
  if (document_->priority) return BuildRanking(inst, *document_->priority);
  return ComputePriority(inst, options_.weights, options_.seed);
}

HttpResponse Session::PutInstance(const std::string& body) {
  return Guard([&] {
    InstanceDocument doc = ParseInstanceDocument(body);
    RequireValidInstance(doc.instance);
    if (doc.priority) BuildRanking(doc.instance, *doc.priority);
    std::unique_lock lock(mu_);
    document_ = std::move(doc);
    return HttpResponse{200, Summary(*document_)};
  });
}

HttpResponse Session::GetInstance() const {
  std::shared_lock lock(mu_);
  if (!document_) return NoInstance();
  return {200, Json(*document_)};
}

HttpResponse Session::UpsertAgent(const std::string& body) {
  return Guard([&] {
    const Agent agent = ParseBody(body).get<Agent>();
    std::unique_lock lock(mu_);
    if (!document_) return NoInstance();
    InstanceDocument next = *document_;
    auto& agents = next.instance.agents;
    auto it = std::find_if(agents.begin(), agents.end(),
                           [&](const Agent& a) { return a.id == agent.id; });
    if (it != agents.end()) {
      *it = agent;
    } else {
      agents.push_back(agent);
      // A newly enrolled agent joins the back of an explicit queue.
      if (next.priority) {
        if (auto* order = std::get_if<ExplicitOrder>(&*next.priority)) {
          order->order.push_back(agent.id);
        }
      }
    }
    RequireValidInstance(next.instance);
    document_ = std::move(next);
    Json out = Summary(*document_);
    out["agent"] = agent;
    return HttpResponse{200, out};
  });
}

HttpResponse Session::GetPriority() const {
  return Guard([&] {
    std::shared_lock lock(mu_);
    if (!document_) return NoInstance();
    return HttpResponse{200, Json(ResolveRanking(Json::object()))};
  });
}

HttpResponse Session::RunRound(const std::string& body) {
  return Guard([&] {
    const Json request = ParseBody(body);
    const MechanismKind kind =
        MechanismField(request, MechanismKind::kSerialDictatorship);
    const RoutingPolicy routing = RoutingField(request);
    const ReportedLocalities reported =
        Present(request, "reported_localities")
            ? ReportedLocalitiesFromJson(request.at("reported_localities"))
            : ReportedLocalities{};
    std::unique_lock lock(mu_);
    if (!document_) return NoInstance();
    const Instance& inst = document_->instance;
    const PriorityRanking ranking = ResolveRanking(request);
    const RoundResult result =
        RunMechanism(kind, inst, ranking, routing, reported);
    const RoundRecord record = MakeRoundRecord(
        log_.next_round_id(), kind, inst, ranking, routing, reported, result);
    log_.Append(record);
    return HttpResponse{201, Json(record)};
  });
}

HttpResponse Session::ListRounds() const {
  Json out = Json::array();
  for (const RoundRecord& r : log_.records()) {
    out.push_back(Json{{"round_id", r.round_id},
                       {"timestamp", r.timestamp},
                       {"mechanism", MechanismName(r.mechanism)},
                       {"instance_digest", r.instance_digest}});
  }
  return {200, out};
}

HttpResponse Session::GetRound(std::uint64_t round_id) const {
  const auto record = log_.Find(round_id);
  if (!record) return RoundNotFound(round_id);
  return {200, Json(*record)};
}

HttpResponse Session::AuditRound(std::uint64_t round_id,
                                 std::optional<std::uint64_t> budget) const {
  return Guard([&] {
    const auto record = log_.Find(round_id);
    if (!record) return RoundNotFound(round_id);
    const ParetoVerdict verdict =
        IsParetoOptimal(record->matching, record->instance,
                        budget.value_or(options_.audit_budget));
    Json out = verdict;
    out["round_id"] = round_id;
    return HttpResponse{200, out};
  });
}

// Defaults to the locality mechanism when a locality is reported, since the
// clearinghouse ignores locality reports.
HttpResponse Session::WhatIfMisreport(const std::string& body) const {
  return Guard([&] {
    const Json request = ParseBody(body);
    const AgentId agent = request.at("agent").get<AgentId>();
    Deviation deviation;
    if (Present(request, "preferences")) {
      deviation.preferences =
          request.at("preferences").get<std::vector<OptionId>>();
    }
    if (Present(request, "locality")) {
      deviation.locality = request.at("locality").get<std::string>();
    }
    const MechanismKind kind = MechanismField(
        request, deviation.locality ? MechanismKind::kLocalityRestricted
                                    : MechanismKind::kSerialDictatorship);
    const RoutingPolicy routing = RoutingField(request);
    std::shared_lock lock(mu_);
    if (!document_) return NoInstance();
    const ManipulationReport report =
        EvaluateDeviation(kind, document_->instance, ResolveRanking(request),
                          routing, agent, deviation);
    Json out = report;
    out["mechanism"] = MechanismName(kind);
    return HttpResponse{200, out};
  });
}

HttpResponse Session::WhatIfMerge(const std::string& body) const {
  return Guard([&] {
    const Json request = ParseBody(body);
    const AgentId agent = request.at("agent").get<AgentId>();
    std::vector<ProviderGrouping> chain;
    for (const Json& g : request.at("chain")) {
      chain.push_back(GroupingFromJson(g));
    }
    PrioritySampler sampler = ExhaustivePriorityOrders{};
    if (Present(request, "samples")) {
      sampler = MonteCarloSeeded{
          request.at("samples").get<std::size_t>(),
          request.value("seed", std::uint64_t{0})};
    }
    UtilityModel model;
    if (Present(request, "utilities")) {
      for (const Json& u : request.at("utilities")) {
        model.Set(agent, OutcomeFromJson(u.at("option")),
                  u.at("value").get<double>());
      }
    }
    const RoutingPolicy routing = RoutingField(request);
    std::shared_lock lock(mu_);
    if (!document_) return NoInstance();
    const auto rows = LocalityExpansionReport(document_->instance, agent,
                                              chain, model, sampler, routing);
    return HttpResponse{200, Json{{"agent", agent}, {"rows", rows}}};
  });
}

std::pair<std::string, int> ParseListenAddress(const std::string& address) {
  const auto colon = address.rfind(':');
  int port = -1;
  if (colon != std::string::npos && colon > 0) {
    const char* first = address.data() + colon + 1;
    const char* last = address.data() + address.size();
    const auto [ptr, ec] = std::from_chars(first, last, port);
    if (ec != std::errc() || ptr != last) port = -1;
  }
  if (port < 0 || port > 65535) {
    throw Error(ErrorCode::kParseError,
                "listen address must look like host:port, got '" + address +
                    "'");
  }
  return {address.substr(0, colon), port};
}

struct HttpService::Impl {
  explicit Impl(Session& s) : session(s) {}
  Session& session;
  httplib::Server server;
};

namespace {

void Reply(httplib::Response& res, const HttpResponse& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

std::optional<std::uint64_t> ParseU64(const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

HttpService::HttpService(Session& session)
    : impl_(std::make_unique<Impl>(session)) {
  httplib::Server& srv = impl_->server;
  Session& s = impl_->session;
  using Req = httplib::Request;
  using Res = httplib::Response;

  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  srv.Options(".*", [](const Req&, Res& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, PUT, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  srv.Put("/instance",
          [&s](const Req& req, Res& res) { Reply(res, s.PutInstance(req.body)); });
  srv.Get("/instance",
          [&s](const Req&, Res& res) { Reply(res, s.GetInstance()); });
  srv.Post("/agents",
           [&s](const Req& req, Res& res) { Reply(res, s.UpsertAgent(req.body)); });
  srv.Get("/priority",
          [&s](const Req&, Res& res) { Reply(res, s.GetPriority()); });
  srv.Post("/rounds",
           [&s](const Req& req, Res& res) { Reply(res, s.RunRound(req.body)); });
  srv.Get("/rounds", [&s](const Req&, Res& res) { Reply(res, s.ListRounds()); });
  srv.Get(R"(/rounds/(\d+))", [&s](const Req& req, Res& res) {
    const auto id = ParseU64(req.matches[1]);
    Reply(res, id ? s.GetRound(*id) : RoundNotFound(0));
  });
  srv.Get(R"(/rounds/(\d+)/audit)", [&s](const Req& req, Res& res) {
    const auto id = ParseU64(req.matches[1]);
    if (!id) return Reply(res, RoundNotFound(0));
    std::optional<std::uint64_t> budget;
    if (req.has_param("budget")) {
      budget = ParseU64(req.get_param_value("budget"));
      if (!budget) {
        return Reply(res, ErrorResponse(400, "ParseError",
                                        "budget must be a nonnegative integer"));
      }
    }
    Reply(res, s.AuditRound(*id, budget));
  });
  srv.Post("/whatif/misreport", [&s](const Req& req, Res& res) {
    Reply(res, s.WhatIfMisreport(req.body));
  });
  srv.Post("/whatif/merge", [&s](const Req& req, Res& res) {
    Reply(res, s.WhatIfMerge(req.body));
  });

  srv.set_exception_handler(
      [](const Req&, Res& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          message = e.what();
        } catch (...) {
        }
        Reply(res, ErrorResponse(500, "InternalError", message));
      });
}

HttpService::~HttpService() { Stop(); }

int HttpService::Bind(const std::string& host, int port) {
  httplib::Server& srv = impl_->server;
  if (port == 0) {
    const int bound = srv.bind_to_any_port(host);
    if (bound < 0) {
      throw Error(ErrorCode::kIoError, "cannot bind " + host + ":0");
    }
    return bound;
  }
  if (!srv.bind_to_port(host, port)) {
    throw Error(ErrorCode::kIoError,
                "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpService::Listen() { impl_->server.listen_after_bind(); }

void HttpService::Stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void HttpService::WaitUntilReady() const { impl_->server.wait_until_ready(); }

}  // namespace havenmatch
