// Copyright 2026 The KBC Privacy Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Subcommands of the `kbc` tool. Each command renders a complete output
// document (JSON record or CSV table) as a string so it can be compared
// byte-for-byte across runs and worker counts.

#ifndef KBC_CLI_COMMANDS_H_
#define KBC_CLI_COMMANDS_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "kbc/cli/config.h"

namespace kbc::cli {

std::string_view artifact_version();

// %.17g, with non-finite values spelled "-inf", "inf" and "nan".
std::string format_number(double v);

std::string cmd_solve(const ExperimentConfig& config);
std::string cmd_simulate(const ExperimentConfig& config, int threads);
std::string cmd_deviate(const ExperimentConfig& config, int threads);
std::string cmd_pop(const ExperimentConfig& config, int threads);
std::string cmd_sweep(const ExperimentConfig& config, int threads);

// Column order of sweep tables.
const std::vector<std::string>& sweep_columns();

// Entry point behind the executable: args excludes the program name.
// Returns 0 on success, 2 for invalid usage or configuration (diagnostic on
// `err`), 1 for any other failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace kbc::cli

#endif  // KBC_CLI_COMMANDS_H_
