// Copyright 2026 The qmemsim Authors
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

#ifndef QMEMSIM_CLI_HPP
#define QMEMSIM_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace qmemsim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kVersion = "0.1.0";

/// Commands accepted by run_cli.
const std::vector<std::string>& cli_commands();

/// Parses arguments (without the program name), runs the command and writes
/// artifacts plus manifest.json under --out. Prints the manifest to `out` on
/// success and an error object to `err` otherwise. Returns the exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmemsim

#endif  // QMEMSIM_CLI_HPP
