//
// Copyright 2026 The FHDP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// The fhdp command-line tool as a library function, so tests can drive it
// in-process.

#ifndef FHDP_TOOLS_CLI_H_
#define FHDP_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace fhdp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitNumeric = 4;

// Runs the tool on `args` (without the program name). Results go to the file
// named by --out, or to `out` when there is none; diagnostics go to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace fhdp::cli

#endif  // FHDP_TOOLS_CLI_H_
