// Copyright 2026 The softland Authors
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

// Mode dispatch and artifact writing for the `softland` command.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "softland/config.hpp"

namespace softland {

inline constexpr std::string_view kVersion = "0.1.0";

/// Exit status of `run`.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
};

/// Runs one configured job. Writes the mode's CSV files and summary.json
/// into config.out_dir; on failure writes error.json there instead and
/// returns a nonzero status. Progress and errors go to `log`.
int run(const RunConfig& config, std::ostream& log);

/// Writes error.json into `out_dir` (created if needed), best effort.
void write_error_record(const std::string& out_dir, std::string_view kind,
                        std::string_view message);

}  // namespace softland
