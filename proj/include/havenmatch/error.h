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

#ifndef HAVENMATCH_ERROR_H_
#define HAVENMATCH_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace havenmatch {

enum class ErrorCode {
  kInvalidWeights,
  kInvalidOrder,
  kInvalidRanking,
  kInvalidPolicy,
  kInvalidUtility,
  kInstanceMismatch,
  kBudgetExceeded,
  kUnknownAgent,
  kInvalidChain,
  kParseError,
  kValidationError,
  kHeaderMismatch,
  kRowError,
  kIoError,
  kDigestMismatch,
  kInvalidRoundId,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// the CLI and the HTTP service can map it to a stable exit/status code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace havenmatch

#endif  // HAVENMATCH_ERROR_H_
