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

// Cost of transport of depth-optimal and CoT-optimal impedance controllers.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "softland/energy.hpp"
#include "softland/optimize.hpp"

namespace softland {

struct CotRow {
  double v0 = 0.0;
  double kp_depth = 0.0;
  double kd_depth = 0.0;
  double depth_depthopt = 0.0;
  double cot_depthopt_diss = 0.0;
  double cot_depthopt_lossless = 0.0;
  double kp_cot = 0.0;
  double kd_cot = 0.0;
  double depth_cotopt = 0.0;
  double cot_cotopt_diss = 0.0;
  double cot_cotopt_lossless = 0.0;
  double depth_rigid = 0.0;
  double cot_rigid = 0.0;  // both conventions agree: a rigid leg does no work
  bool ok = false;
  std::string error;
};

/// Energy report of one impedance run up to its rest time.
EnergyReport impedance_energy(double k_p, double k_d, double v0, const Params& params,
                              const SweepOptions& options);

/// Sweeps each v0 under both objectives. A failing row keeps its error and
/// the table continues.
std::vector<CotRow> cot_vs_depth_comparison(const std::vector<double>& v0_list,
                                            const Params& params, const GridSpec& grid = {},
                                            const SweepOptions& options = {});

void write_cot_csv(std::ostream& out, const std::vector<CotRow>& rows);

}  // namespace softland
