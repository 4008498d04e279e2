// Copyright 2026 The skatemount Authors
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

#ifndef SKATEMOUNT_CLI_HPP_
#define SKATEMOUNT_CLI_HPP_

#include <string>

namespace skatemount {

// Exit codes: 0 success, 1 runtime/I-O failure, 2 bad arguments or config
// errors, 3 refused to overwrite without --force, 4 checkpoint/environment
// dimension mismatch.
int run_cli(int argc, const char* const* argv);

// Precedence: --output-dir, then the config file's output_dir, then
// $SKATEMOUNT_OUTPUT_DIR, then "./runs".
std::string resolve_output_dir(const std::string& cli_value,
                               const std::string& config_value);

// Worker threads for the environment batch, from $SKATEMOUNT_THREADS
// (default 1). Scheduling lives outside the run config on purpose: the same
// config hash must reproduce the same run at any thread count.
int env_thread_count();

}  // namespace skatemount

#endif  // SKATEMOUNT_CLI_HPP_
