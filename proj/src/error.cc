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

#include "havenmatch/error.h"

namespace havenmatch {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidWeights: return "InvalidWeights";
    case ErrorCode::kInvalidOrder: return "InvalidOrder";
    case ErrorCode::kInvalidRanking: return "InvalidRanking";
    case ErrorCode::kInvalidPolicy: return "InvalidPolicy";
    case ErrorCode::kInvalidUtility: return "InvalidUtility";
    case ErrorCode::kInstanceMismatch: return "InstanceMismatch";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kUnknownAgent: return "UnknownAgent";
    case ErrorCode::kInvalidChain: return "InvalidChain";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kHeaderMismatch: return "HeaderMismatch";
    case ErrorCode::kRowError: return "RowError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kDigestMismatch: return "DigestMismatch";
    case ErrorCode::kInvalidRoundId: return "InvalidRoundId";
  }
  return "Unknown";
}

}  // namespace havenmatch
