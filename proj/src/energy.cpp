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

#include "softland/energy.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace softland {

namespace {
constexpr double kAuditTol = 1e-6;
}

double mechanical_energy(const State& s, double r_m) {
  const double body = r_m / (1.0 + r_m);
  const double foot = 1.0 / (1.0 + r_m);
  return body * (0.5 * s.v_b * s.v_b + s.x_b) + foot * (0.5 * s.v_f * s.v_f + s.x_f);
}

EnergyReport energy_report(const SimOutcome& outcome, const Trajectory& trajectory,
                           double r_m) {
  if (outcome.stroke_violation) {
    throw EnergyError("energy_report: run violated the stroke limit");
  }
  if (!outcome.settled || !outcome.has_rest()) {
    throw EnergyError("energy_report: run did not settle");
  }
  if (trajectory.samples.empty()) throw EnergyError("energy_report: empty trajectory");

  const State& start = trajectory.samples.front().state;
  const State& rest = outcome.rest_state;
  EnergyReport r;
  r.e0 = mechanical_energy(start, r_m);
  r.eT = mechanical_energy(rest, r_m);
  r.e_act = start.w_act - rest.w_act;
  r.e_gnd = rest.w_gnd - start.w_gnd;
  r.audit_residual = std::abs((r.e0 - r.eT) - (r.e_act + r.e_gnd));
  r.cot_dissipative = (r.e_gnd + r.e_act) / r.e0;
  r.cot_lossless = r.e_gnd / r.e0;
  r.actuator_injected = r.e_act < 0.0;

  // One downward intrusion from the surface does depth^2/2 of ground work,
  // even when the foot later retracts and rests above its deepest point.
  if (outcome.steps == 1) {
    const double closed = 0.5 * outcome.depth * outcome.depth;
    if (std::abs(r.e_gnd - closed) > kAuditTol) {
      std::ostringstream msg;
      msg << "energy_report: single-step ground work " << r.e_gnd
          << " disagrees with depth^2/2 = " << closed;
      throw EnergyError(msg.str());
    }
  }
  return r;
}

double cot_of(const SimOutcome& outcome, const Params& params, double v0) {
  if (!outcome.has_rest()) return std::numeric_limits<double>::quiet_NaN();
  const double e0 = mechanical_energy(State::impact(params, v0), params.r_m);
  const double eT = mechanical_energy(outcome.rest_state, params.r_m);
  return (e0 - eT) / e0;
}

}  // namespace softland
