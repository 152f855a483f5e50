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

// Run configuration for the command-line front end.
//
// The format is flat `key = value` lines with `#` comments. Numeric lists
// accept a scalar, a comma list, or an inclusive range `start:stop:count`.
// Parameters come from exactly one of two blocks: dimensionless
// (r_m, s, u_max, l0, v0) or physical (m_b, m_f, k_g, g, S, U_max, V0).

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "softland/model.hpp"
#include "softland/optimize.hpp"
#include "softland/sim.hpp"

namespace softland {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { Simulate, Sweep, Curves, BangBang, Compare, Cot };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view text);

/// One `key=value` assignment and where it came from, for error messages.
struct ConfigEntry {
  std::string key;
  std::string value;
  std::string where;
};

struct RunConfig {
  Mode mode = Mode::Simulate;
  bool physical = false;
  PhysicalParams physical_params;  // meaningful when `physical`
  Scales scales;                   // zero unless `physical`
  Params params;
  bool u_max_given = false;
  std::vector<double> v0;          // dimensionless impact velocities
  std::vector<double> V0;          // physical velocities when `physical`
  Controller controller = Rigid{};
  GridSpec grid;
  SimOptions sim;
  Objective objective = Objective::Depth;
  std::vector<double> r_m_list;
  std::vector<double> s_list;
  double stroke_shrink = 1.0;
  bool refine = true;
  int n_switches = 1;
  std::string out_dir = "out";
  unsigned workers = 0;

  /// Effective assignments after overrides, in first-seen key order.
  std::vector<ConfigEntry> entries;
};

/// Splits config text into entries; `origin` prefixes line references.
std::vector<ConfigEntry> read_entries(std::string_view text, std::string_view origin);

/// Parses `key=value` from a command-line override.
ConfigEntry parse_assignment(std::string_view text, std::string_view where);

/// Later entries override earlier ones with the same key. Throws
/// ConfigError naming the offending key and its origin.
RunConfig build_config(const std::vector<ConfigEntry>& entries);

RunConfig parse_config(std::string_view text, std::string_view origin = "config");

/// Config text that reparses to an equivalent RunConfig.
std::string to_config_text(const RunConfig& config);

/// Scalar, comma list, or inclusive `start:stop:count` range.
std::vector<double> parse_number_list(std::string_view text);

}  // namespace softland
