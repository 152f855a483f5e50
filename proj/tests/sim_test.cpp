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

#include <cmath>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "softland/energy.hpp"
#include "softland/sim.hpp"

namespace softland {
namespace {

// Independent oracle: classical RK4 on the lumped rigid ODE x'' = -1 - x
// from x = 0, x' = v0, stopped at the first sign change of x' and refined by
// the local parabola through the last step.
double rigid_oracle_depth(double v0) {
  const double h = 1e-4;
  double x = 0.0;
  double v = v0;
  auto acc = [](double xx) { return -1.0 - xx; };
  if (v0 == 0.0) {
    // Starts at rest with net downward force; step once to leave v = 0.
    v = h * acc(x);
    x = 0.5 * h * h * acc(0.0);
  }
  for (;;) {
    const double k1x = v, k1v = acc(x);
    const double k2x = v + 0.5 * h * k1v, k2v = acc(x + 0.5 * h * k1x);
    const double k3x = v + 0.5 * h * k2v, k3v = acc(x + 0.5 * h * k2x);
    const double k4x = v + h * k3v, k4v = acc(x + h * k3x);
    const double xn = x + h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
    const double vn = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    if (vn >= 0.0) return -(x - v * v / (2.0 * acc(x)));
    x = xn;
    v = vn;
  }
}

SimOutcome run(const Controller& c, double v0, const Params& p = Params::make(5, 20),
               SimOptions o = {}) {
  return simulate(c, p, v0, o).outcome;
}

TEST(RigidOracle, MatchesIndependentIntegrationAndClosedForm) {
  for (double v0 : {0.0, -0.3, -1.0, -2.5, -6.0, -10.0}) {
    const double sim = run(Rigid{}, v0).depth;
    EXPECT_NEAR(sim, rigid_oracle_depth(v0), 1e-6) << v0;
    EXPECT_NEAR(sim, rigid_depth(v0), 1e-6) << v0;
  }
}

TEST(RigidOracle, SingleStepAndSettled) {
  for (double v0 : {0.0, -1.0, -10.0}) {
    const SimOutcome o = run(Rigid{}, v0);
    EXPECT_EQ(o.steps, 1);
    EXPECT_TRUE(o.settled);
    EXPECT_FALSE(o.stroke_violation);
    EXPECT_EQ(o.final_phase, Phase::Static);
  }
}

TEST(SteppedIntrusion, StepCountsFollowDamping) {
  EXPECT_EQ(run(Impedance{0.2, 0.0}, -1.0).steps, 3);
  EXPECT_EQ(run(Impedance{0.2, 0.18}, -1.0).steps, 2);
  EXPECT_EQ(run(Impedance{0.2, 0.4}, -1.0).steps, 1);
}

TEST(Simulate, TrajectoryInvariants) {
  const SimResult r = simulate(Impedance{0.2, 0.0}, Params::make(5, 20), -1.0);
  const auto& smp = r.trajectory.samples;
  ASSERT_GE(smp.size(), 2u);
  for (std::size_t i = 1; i < smp.size(); ++i) {
    EXPECT_GT(smp[i].tau, smp[i - 1].tau) << i;
    EXPECT_GE(smp[i].gamma, 0.0);
    EXPECT_GE(smp[i].state.w_gnd, -1e-15);
  }
  // Every phase change between consecutive samples has an event record.
  int changes = 0;
  for (std::size_t i = 1; i < smp.size(); ++i) changes += smp[i].phase != smp[i - 1].phase;
  int phase_events = 0;
  for (const auto& e : r.trajectory.events) {
    phase_events += e.kind == EventKind::PhaseChange && e.from != e.to;
  }
  EXPECT_EQ(changes, phase_events);
}

TEST(Simulate, EnergyAuditAtEverySample) {
  const Params p = Params::make(5, 20);
  for (const Controller& c : {Controller{Impedance{0.2, 0.0}}, Controller{Impedance{0.6, 0.05}},
                              Controller{Rigid{}}, Controller{ConstantForce{0.5}}}) {
    const SimResult r = simulate(c, p, -2.0, {});
    const double e0 = mechanical_energy(r.trajectory.samples.front().state, p.r_m);
    for (const auto& s : r.trajectory.samples) {
      const double lhs = e0 - mechanical_energy(s.state, p.r_m);
      const double rhs = -s.state.w_act + s.state.w_gnd;
      ASSERT_NEAR(lhs, rhs, 1e-6) << controller_name(c) << " tau=" << s.tau;
    }
  }
}

TEST(Simulate, StrokeViolationTerminates) {
  const SimOutcome o = run(Impedance{0.0, 0.0}, -3.0);
  EXPECT_TRUE(o.stroke_violation);
  EXPECT_EQ(o.termination, Termination::StrokeViolation);
  EXPECT_FALSE(o.settled);
  EXPECT_GT(o.violation_time, 0.0);
  EXPECT_NEAR(o.final_state.gap(), 0.0, 1e-9);
}

TEST(Simulate, PureDamperNeverSettles) {
  // No spring means no static equilibrium: the body drifts to a stroke end or
  // runs out the horizon.
  SimOptions o;
  o.tau_max = 30.0;
  const SimOutcome out = run(Impedance{0.0, 0.8}, -0.5, Params::make(5, 20), o);
  EXPECT_FALSE(out.settled);
}

TEST(Simulate, SettledRestRespectsStaticSupport) {
  for (double kd : {0.0, 0.18, 0.4, 0.9}) {
    const SimResult r = simulate(Impedance{0.3, kd}, Params::make(5, 20), -1.5);
    const SimOutcome& o = r.outcome;
    if (!o.settled) continue;
    const double u = r.trajectory.samples.back().u;
    EXPECT_GE(-o.final_state.x_f, required_support(u, 5.0) - kYieldGuard);
    EXPECT_GE(o.depth, 1.0 - 1e-6);
  }
}

TEST(Simulate, DepthIsLowerBoundedByStaticSupport) {
  for (double v0 : {-0.05, -0.5, -2.0}) {
    for (double kp : {0.1, 0.4, 0.9}) {
      for (double kd : {0.1, 0.5, 1.0}) {
        const SimOutcome o = run(Impedance{kp, kd}, v0);
        if (o.settled && !o.stroke_violation) EXPECT_GE(o.depth, 1.0 - 1e-6);
      }
    }
  }
}

TEST(Simulate, IsBitwiseDeterministic) {
  const SimOutcome a = run(Impedance{0.2, 0.18}, -1.0);
  const SimOutcome b = run(Impedance{0.2, 0.18}, -1.0);
  EXPECT_EQ(a.depth, b.depth);
  EXPECT_EQ(a.rest_time, b.rest_time);
  EXPECT_EQ(a.e_act, b.e_act);
  EXPECT_EQ(a.final_state.x_b, b.final_state.x_b);
}

TEST(Simulate, TighterTolerancesMoveDepthLessThanOneMicro) {
  SimOptions fine;
  fine.rel_tol = 0.5e-9;
  fine.abs_tol = 0.5e-11;
  fine.event_tol = 0.5e-12;
  for (const Controller& c : {Controller{Impedance{0.2, 0.0}}, Controller{Impedance{0.5, 0.4}}}) {
    const double a = run(c, -2.0).depth;
    const double b = run(c, -2.0, Params::make(5, 20), fine).depth;
    EXPECT_LT(std::abs(a - b), 1e-6);
  }
}

TEST(Simulate, BangBangSwitchesAtExactTimes) {
  const SimResult r = simulate(BangBang{8.2, {0.12}}, Params::make(5, 20, 8.2), -3.0);
  bool saw = false;
  for (const auto& e : r.trajectory.events) {
    if (e.kind == EventKind::Switch) {
      EXPECT_EQ(e.tau, 0.12);
      saw = true;
    }
  }
  EXPECT_TRUE(saw);
}

TEST(Simulate, StopAtFootStopEndsAtFirstRest) {
  SimOptions o;
  o.stop_at_foot_stop = true;
  const SimOutcome out = run(BangBang{8.2, {0.126}}, -3.0, Params::make(5, 20, 8.2), o);
  EXPECT_EQ(out.termination, Termination::FootStopped);
  EXPECT_EQ(out.rest_state.v_f, 0.0);
  EXPECT_EQ(out.rest_time, out.final_state.tau);
}

TEST(Simulate, RejectsPositiveImpactVelocityAndBadOptions) {
  EXPECT_ANY_THROW(run(Rigid{}, 0.5));
  SimOptions o;
  o.rel_tol = 0.0;
  EXPECT_ANY_THROW(run(Rigid{}, -1.0, Params::make(5, 20), o));
}

TEST(CountSteps, MergesEventSlivers) {
  Trajectory t;
  t.event_tol = 1e-12;
  auto add = [&](double tau, Phase ph, double x_f) {
    Sample s;
    s.tau = tau;
    s.phase = ph;
    s.state.x_f = x_f;
    t.samples.push_back(s);
  };
  add(0.0, Phase::Yielding, 0.0);
  add(1.0, Phase::Yielding, -1.0);
  add(1.0 + 5e-13, Phase::Static, -1.0);
  add(1.0 + 8e-12, Phase::Yielding, -1.0);
  add(1.5, Phase::Yielding, -1.2);
  add(2.0, Phase::Static, -1.2);
  EXPECT_EQ(count_steps(t), 1);
  add(3.0, Phase::Yielding, -1.2);
  add(3.5, Phase::Yielding, -1.5);
  add(4.0, Phase::Static, -1.5);
  EXPECT_EQ(count_steps(t), 2);
}

TEST(CountSteps, MonotoneSingleIntrusionIsOne) {
  EXPECT_EQ(count_steps(simulate(Rigid{}, Params::make(5, 20), -2.0).trajectory), 1);
}

TEST(TrajectoryCsv, HeaderAndRoundTrip) {
  const SimResult r = simulate(Impedance{0.2, 0.4}, Params::make(5, 20), -1.0);
  std::ostringstream out;
  write_trajectory_csv(out, r.trajectory);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "tau,x_b,v_b,x_f,v_f,phase,u,gamma,w_act,w_gnd");
  std::getline(in, line);
  std::getline(in, line);
  const double tau = std::stod(line.substr(0, line.find(',')));
  EXPECT_EQ(tau, r.trajectory.samples[1].tau);
}

}  // namespace
}  // namespace softland
