// Copyright 2026 The bgqa Authors
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

#ifndef BGQA_CLI_H_
#define BGQA_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace bgqa {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitTransport = 3;

// Entry point of the `bgqa` tool. args excludes the program name.
// Subcommands: ingest, index, ask, explain, evaluate, sweep, stats.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bgqa

#endif  // BGQA_CLI_H_
