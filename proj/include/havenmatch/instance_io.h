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

#ifndef HAVENMATCH_INSTANCE_IO_H_
#define HAVENMATCH_INSTANCE_IO_H_

#include <cstddef>
#include <filesystem>
#include <string>

#include "havenmatch/error.h"
#include "havenmatch/json_codec.h"
#include "havenmatch/model.h"

namespace havenmatch {

// Compact, sorted-key JSON of the instance (agents, options, providers).
// The digest of an instance is computed over exactly these bytes.
std::string CanonicalInstanceJson(const Instance& instance);

// "sha256:" followed by 64 lowercase hex digits.
std::string InstanceDigest(const Instance& instance);

// Reads, parses and validates an instance document.
// Throws Error(kIoError), Error(kParseError) or ValidationError.
InstanceDocument LoadDocument(const std::filesystem::path& path);
Instance LoadInstance(const std::filesystem::path& path);

// Throws Error(kIoError).
void SaveDocument(const std::filesystem::path& path,
                  const InstanceDocument& doc);

std::string ReadFile(const std::filesystem::path& path);

// A CSV data row that could not be decoded. `line` is 1-based and counts the
// header row.
class RowError : public Error {
 public:
  RowError(const std::string& file, std::size_t line,
           const std::string& message)
      : Error(ErrorCode::kRowError,
              file + ":" + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Roster import. Header rows must be exactly
//   agents:    id,locality,current_option,family_size,health_risk,
//              wait_time_days,preferences
//   options:   id,provider
//   providers: id,locality
// Preferences are '|'-separated option ids, most preferred first; an empty
// current_option means the agent has no option in the instance.
// Throws Error(kHeaderMismatch) or RowError. The result is not validated.
InstanceDocument ImportCsvText(const std::string& agents_csv,
                               const std::string& options_csv,
                               const std::string& providers_csv);
InstanceDocument ImportCsv(const std::filesystem::path& agents_csv,
                           const std::filesystem::path& options_csv,
                           const std::filesystem::path& providers_csv);

}  // namespace havenmatch

#endif  // HAVENMATCH_INSTANCE_IO_H_
