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

#include "havenmatch/round_log.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <ctime>
#include <fstream>

#include "havenmatch/instance_io.h"

namespace havenmatch {

void to_json(Json& j, const RoundRecord& r) {
  j = Json{{"round_id", r.round_id},
           {"timestamp", r.timestamp},
           {"mechanism", MechanismName(r.mechanism)},
           {"instance_digest", r.instance_digest},
           {"instance", r.instance},
           {"ranking", r.ranking},
           {"routing", r.routing},
           {"reported_localities",
            ReportedLocalitiesToJson(r.reported_localities)},
           {"matching", r.matching},
           {"trace", r.trace}};
}

void from_json(const Json& j, RoundRecord& r) {
  r.round_id = j.at("round_id").get<std::uint64_t>();
  r.timestamp = j.at("timestamp").get<std::string>();
  const auto mechanism = ParseMechanism(j.at("mechanism").get<std::string>());
  if (!mechanism) {
    throw Error(ErrorCode::kParseError, "unknown mechanism in round record");
  }
  r.mechanism = *mechanism;
  r.instance_digest = j.at("instance_digest").get<std::string>();
  r.instance = j.at("instance").get<Instance>();
  r.ranking = j.at("ranking").get<PriorityRanking>();
  r.routing = j.at("routing").get<RoutingPolicy>();
  r.reported_localities =
      ReportedLocalitiesFromJson(j.at("reported_localities"));
  r.matching = j.at("matching").get<Matching>();
  r.trace = j.at("trace").get<RoundTrace>();
}

std::string UtcTimestamp(std::chrono::system_clock::time_point when) {
  const std::time_t t = std::chrono::system_clock::to_time_t(when);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RoundRecord MakeRoundRecord(std::uint64_t round_id, MechanismKind mechanism,
                            const Instance& instance,
                            const PriorityRanking& ranking,
                            const RoutingPolicy& routing,
                            const ReportedLocalities& reported,
                            const RoundResult& result) {
  RoundRecord r;
  r.round_id = round_id;
  r.timestamp = UtcTimestamp(std::chrono::system_clock::now());
  r.mechanism = mechanism;
  r.instance_digest = InstanceDigest(instance);
  r.instance = instance;
  r.ranking = ranking;
  r.routing = routing;
  r.reported_localities = reported;
  r.matching = result.matching;
  r.trace = result.trace;
  return r;
}

RoundResult ReplayRound(const RoundRecord& record) {
  return RunMechanism(record.mechanism, record.instance, record.ranking,
                      record.routing, record.reported_localities);
}

bool ReplayMatches(const RoundRecord& record) {
  const RoundResult replay = ReplayRound(record);
  return replay.matching == record.matching && replay.trace == record.trace;
}

std::vector<RoundRecord> ReadRoundLog(const std::filesystem::path& path) {
  std::vector<RoundRecord> out;
  if (!std::filesystem::exists(path)) return out;
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open log '" + path.string() + "'");
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(Json::parse(line).get<RoundRecord>());
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kParseError, path.string() + ":" +
                                              std::to_string(line_no) + ": " +
                                              e.what());
    }
  }
  return out;
}

void AppendRound(const std::filesystem::path& path, const RoundRecord& record) {
  if (InstanceDigest(record.instance) != record.instance_digest) {
    throw Error(ErrorCode::kDigestMismatch,
                "round " + std::to_string(record.round_id) +
                    ": digest does not match the logged instance");
  }
  const std::string line = Json(record).dump() + '\n';

  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC,
                        0644);
  if (fd < 0) {
    throw Error(ErrorCode::kIoError, "cannot open log '" + path.string() +
                                         "': " + std::strerror(errno));
  }
  const ssize_t written = ::write(fd, line.data(), line.size());
  const int write_errno = errno;
  const bool synced = written >= 0 && ::fsync(fd) == 0;
  ::close(fd);
  if (written != static_cast<ssize_t>(line.size()) || !synced) {
    throw Error(ErrorCode::kIoError,
                "short or failed write to log '" + path.string() +
                    "': " + std::strerror(write_errno));
  }
}

RoundLog::RoundLog(std::filesystem::path path)
    : path_(std::move(path)), records_(ReadRoundLog(path_)) {}

std::uint64_t RoundLog::next_round_id() const {
  std::lock_guard<std::mutex> lock(mu_);
  return records_.empty() ? 1 : records_.back().round_id + 1;
}

void RoundLog::Append(const RoundRecord& record) {
  std::lock_guard<std::mutex> lock(mu_);
  if (!records_.empty() && record.round_id <= records_.back().round_id) {
    throw Error(ErrorCode::kInvalidRoundId,
                "round id " + std::to_string(record.round_id) +
                    " does not exceed the last logged id " +
                    std::to_string(records_.back().round_id));
  }
  AppendRound(path_, record);
  records_.push_back(record);
}

std::optional<RoundRecord> RoundLog::Find(std::uint64_t round_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  for (const RoundRecord& r : records_) {
    if (r.round_id == round_id) return r;
  }
  return std::nullopt;
}

std::vector<RoundRecord> RoundLog::records() const {
  std::lock_guard<std::mutex> lock(mu_);
  return records_;
}

}  // namespace havenmatch
