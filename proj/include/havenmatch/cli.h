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

#ifndef HAVENMATCH_CLI_H_
#define HAVENMATCH_CLI_H_

#include <iosfwd>

namespace havenmatch {

// Process exit codes. Scripts rely on these values.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitPropertyViolated = 3;
inline constexpr int kExitBudgetExceeded = 4;

// Entry point of the `havenmatch` tool. Standard output is written only once
// the command has completed, so a failing command leaves it empty.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace havenmatch

#endif  // HAVENMATCH_CLI_H_
