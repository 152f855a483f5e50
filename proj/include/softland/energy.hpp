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

// Energy bookkeeping for an impact. Energies are in units of u_s * x_s with
// the gravitational datum at the undisturbed ground surface.

#pragma once

#include <stdexcept>

#include "softland/model.hpp"
#include "softland/sim.hpp"

namespace softland {

class EnergyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double mechanical_energy(const State& state, double r_m);

struct EnergyReport {
  double e0 = 0.0;
  double eT = 0.0;
  double e_act = 0.0;  // energy absorbed by the actuator up to T
  double e_gnd = 0.0;  // energy dissipated in the ground up to T
  double cot_dissipative = 0.0;
  double cot_lossless = 0.0;
  double audit_residual = 0.0;
  /// Actuator returned net energy, so cot_dissipative < cot_lossless.
  bool actuator_injected = false;
};

/// Energy audit up to the foot rest time. Throws EnergyError for runs that
/// violated the stroke or never settled.
EnergyReport energy_report(const SimOutcome& outcome, const Trajectory& trajectory,
                           double r_m);

/// Dissipative cost of transport of a finished run, NaN without a rest time.
double cot_of(const SimOutcome& outcome, const Params& params, double v0);

}  // namespace softland
