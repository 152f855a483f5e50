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

// Event-driven simulation of a single impact.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "softland/integrator.hpp"
#include "softland/model.hpp"

namespace softland {

class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, State state)
      : std::runtime_error(what), state_(state) {}
  const State& state() const { return state_; }

 private:
  State state_;
};

struct SimOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double event_tol = 1e-12;
  double tau_max = 50.0;
  double settle_vel = 1e-6;
  /// Trajectory sampling interval; 0 keeps event samples only.
  double record_dt = 0.01;
  /// End the run the first time the foot stops intruding (v_f rises to 0).
  bool stop_at_foot_stop = false;

  void validate() const;
};

enum class EventKind {
  PhaseChange,
  Switch,
  StrokeViolation,
  FootStopped,
  Settled,
  Horizon,
};

std::string_view to_string(EventKind kind);

struct Sample {
  double tau = 0.0;
  State state;
  Phase phase = Phase::Yielding;
  double u = 0.0;
  double gamma = 0.0;
};

struct EventRecord {
  double tau = 0.0;
  EventKind kind = EventKind::PhaseChange;
  Phase from = Phase::Yielding;
  Phase to = Phase::Yielding;
};

struct Trajectory {
  /// Time-ordered; every phase change contributes a sample at its event time.
  std::vector<Sample> samples;
  std::vector<EventRecord> events;
  double event_tol = 1e-12;
};

enum class Termination { Settled, StrokeViolation, FootStopped, Horizon };

std::string_view to_string(Termination t);

struct SimOutcome {
  double depth = 0.0;       // max over time of -x_f
  double rest_time = 0.0;   // final Static entry, NaN when the foot never rests
  int steps = 0;
  bool stroke_violation = false;
  double violation_time = 0.0;  // NaN unless stroke_violation
  bool settled = false;
  Termination termination = Termination::Horizon;
  Phase final_phase = Phase::Yielding;
  State final_state;
  State rest_state;  // state at rest_time
  double e_act = 0.0;  // actuator-absorbed energy at the end of the run
  double e_gnd = 0.0;  // ground-dissipated energy at the end of the run
  double u_peak = 0.0;
  double min_gap = 0.0;
  double max_gap = 0.0;

  bool has_rest() const;
};

struct SimResult {
  SimOutcome outcome;
  Trajectory trajectory;
};

/// Integrates one impact from x(0) = [l0, v0, 0, v0].
SimResult simulate(const Controller& controller, const Params& params, double v0,
                   const SimOptions& options = {});

/// Number of Yielding episodes with downward foot motion. Episodes separated
/// by less than 10 event_tol of another phase count once.
int count_steps(const Trajectory& trajectory);

/// CSV with columns tau,x_b,v_b,x_f,v_f,phase,u,gamma,w_act,w_gnd.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace softland
