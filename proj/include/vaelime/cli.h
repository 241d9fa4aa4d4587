/*
 * Copyright 2026 The vaelime Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef VAELIME_CLI_H_
#define VAELIME_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace vaelime {

inline constexpr const char* kToolVersion = "0.1.0";

// Stable process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCompute = 3;

// Entry point for the `vaelime` tool. `args` excludes the program name.
// Subcommands: gen-data, train-vae, train-blackbox, explain, benchmark.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace vaelime

#endif  // VAELIME_CLI_H_
