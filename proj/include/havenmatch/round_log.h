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

// Append-only round log. Each line is one JSON record holding everything
// needed to rerun the round: the instance, the ranking, the routing inputs,
// and the resulting matching and trace.

#ifndef HAVENMATCH_ROUND_LOG_H_
#define HAVENMATCH_ROUND_LOG_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "havenmatch/json_codec.h"
#include "havenmatch/mechanism.h"

namespace havenmatch {

struct RoundRecord {
  std::uint64_t round_id = 0;
  std::string timestamp;  // UTC, e.g. 2026-10-16T20:01:00Z
  MechanismKind mechanism = MechanismKind::kSerialDictatorship;
  std::string instance_digest;
  Instance instance;
  PriorityRanking ranking;
  RoutingPolicy routing;
  ReportedLocalities reported_localities;
  Matching matching;
  RoundTrace trace;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

void to_json(Json& j, const RoundRecord& r);
void from_json(const Json& j, RoundRecord& r);

std::string UtcTimestamp(std::chrono::system_clock::time_point when);

// Fills in the digest and the current time.
RoundRecord MakeRoundRecord(std::uint64_t round_id, MechanismKind mechanism,
                            const Instance& instance,
                            const PriorityRanking& ranking,
                            const RoutingPolicy& routing,
                            const ReportedLocalities& reported,
                            const RoundResult& result);

// Reruns the logged mechanism on the logged inputs.
RoundResult ReplayRound(const RoundRecord& record);

// True iff the replay reproduces the logged matching and trace exactly.
bool ReplayMatches(const RoundRecord& record);

// Reads every record; a missing file is an empty log.
// Throws Error(kIoError) or Error(kParseError).
std::vector<RoundRecord> ReadRoundLog(const std::filesystem::path& path);

// Appends one record as a single line written with one write(2) call on an
// O_APPEND descriptor. Throws Error(kDigestMismatch) if the record's digest
// does not match its instance, Error(kIoError) on failure.
void AppendRound(const std::filesystem::path& path, const RoundRecord& record);

// In-process handle on a log file that also enforces strictly increasing
// round ids. Thread-safe.
class RoundLog {
 public:
  explicit RoundLog(std::filesystem::path path);

  const std::filesystem::path& path() const { return path_; }
  std::uint64_t next_round_id() const;

  // Throws Error(kInvalidRoundId) unless record.round_id exceeds every id
  // already in the log, plus whatever AppendRound throws.
  void Append(const RoundRecord& record);

  std::optional<RoundRecord> Find(std::uint64_t round_id) const;
  std::vector<RoundRecord> records() const;

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::vector<RoundRecord> records_;
};

}  // namespace havenmatch

#endif  // HAVENMATCH_ROUND_LOG_H_
