// Copyright (c) 2026 The fgtts Authors
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

#ifndef FGTTS_TOOLS_CLI_H_
#define FGTTS_TOOLS_CLI_H_

namespace fgtts::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Runs one subcommand. Returns 0 on success, 2 on usage errors and 1 on
// runtime failures; diagnostics go to stderr.
int Run(int argc, char** argv);

}  // namespace fgtts::cli

#endif  // FGTTS_TOOLS_CLI_H_
