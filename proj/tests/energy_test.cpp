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

#include <gtest/gtest.h>

#include "softland/cot.hpp"
#include "softland/energy.hpp"

namespace softland {
namespace {

const Params kRef = Params::make(5.0, 20.0);

TEST(MechanicalEnergy, Examples) {
  EXPECT_EQ(mechanical_energy(State{}, 5.0), 0.0);
  State s;
  s.x_b = 10.0;
  EXPECT_DOUBLE_EQ(mechanical_energy(s, 5.0), 25.0 / 3.0);
  for (double v0 : {0.0, -1.0, -4.0}) {
    EXPECT_NEAR(mechanical_energy(State::impact(kRef, v0), 5.0),
                0.5 * v0 * v0 + 5.0 / 6.0 * kRef.l0, 1e-12);
  }
}

TEST(EnergyReport, RigidImpactFromRest) {
  const SimResult r = simulate(Rigid{}, kRef, 0.0);
  const EnergyReport e = energy_report(r.outcome, r.trajectory, kRef.r_m);
  EXPECT_NEAR(e.e_gnd, 2.0, 1e-6);
  EXPECT_EQ(e.e_act, 0.0);
  EXPECT_NEAR(e.e0 - e.eT, 2.0, 1e-6);
  EXPECT_LE(e.audit_residual, 1e-6);
}

TEST(EnergyReport, RigidCotMatchesClosedForm) {
  for (double v0 : {-0.5, -3.0, -10.0}) {
    const SimResult r = simulate(Rigid{}, kRef, v0);
    const EnergyReport e = energy_report(r.outcome, r.trajectory, kRef.r_m);
    const double d = rigid_depth(v0);
    const double e0 = 0.5 * v0 * v0 + 5.0 / 6.0 * kRef.l0;
    EXPECT_NEAR(e.cot_lossless, 0.5 * d * d / e0, 1e-6);
    EXPECT_NEAR(e.cot_dissipative, e.cot_lossless, 1e-12);
  }
}

TEST(EnergyReport, AuditClosesOnImpedanceRuns) {
  for (double kp : {0.1, 0.3, 0.8}) {
    for (double kd : {0.0, 0.2, 0.6}) {
      const SimResult r = simulate(Impedance{kp, kd}, kRef, -2.0);
      if (!r.outcome.settled || r.outcome.stroke_violation) continue;
      const EnergyReport e = energy_report(r.outcome, r.trajectory, kRef.r_m);
      EXPECT_LE(e.audit_residual, 1e-6);
      EXPECT_GE(e.e_gnd, 0.5 * r.outcome.depth * r.outcome.depth - 1e-6);
      if (e.e_act >= 0.0) EXPECT_LE(e.cot_lossless, e.cot_dissipative);
      EXPECT_EQ(e.actuator_injected, e.e_act < 0.0);
    }
  }
}

TEST(EnergyReport, SingleStepGroundWorkIsHalfDepthSquared) {
  const SimResult r = simulate(Impedance{0.2, 0.4}, kRef, -1.0);
  ASSERT_EQ(r.outcome.steps, 1);
  const EnergyReport e = energy_report(r.outcome, r.trajectory, kRef.r_m);
  EXPECT_NEAR(e.e_gnd, 0.5 * r.outcome.depth * r.outcome.depth, 1e-6);
}

TEST(EnergyReport, PureDamperOnlyAbsorbs) {
  SimOptions o;
  o.tau_max = 20.0;
  const SimResult r = simulate(Impedance{0.0, 0.7}, kRef, -1.0, o);
  EXPECT_GE(r.outcome.e_act, -1e-12);
}

TEST(EnergyReport, RejectsUnsettledAndViolatingRuns) {
  const SimResult bad = simulate(Impedance{0.0, 0.0}, kRef, -3.0);
  ASSERT_TRUE(bad.outcome.stroke_violation);
  EXPECT_THROW(energy_report(bad.outcome, bad.trajectory, kRef.r_m), EnergyError);
  SimOptions o;
  o.tau_max = 0.5;
  const SimResult early = simulate(Impedance{0.3, 0.3}, kRef, -1.0, o);
  ASSERT_FALSE(early.outcome.settled);
  EXPECT_THROW(energy_report(early.outcome, early.trajectory, kRef.r_m), EnergyError);
}

TEST(CotComparison, RowsAndCsv) {
  GridSpec g;
  g.kp_count = 11;
  g.kd_count = 11;
  const auto rows = cot_vs_depth_comparison({-1.0, -4.0}, kRef, g);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    ASSERT_TRUE(r.ok) << r.error;
    EXPECT_LE(r.cot_cotopt_diss, r.cot_depthopt_diss + 1e-12);
    EXPECT_LE(r.depth_depthopt, r.depth_cotopt + 1e-12);
    EXPECT_NEAR(r.depth_rigid, rigid_depth(r.v0), 1e-6);
  }
  std::ostringstream out;
  write_cot_csv(out, rows);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "v0,kp_depth,kd_depth,depth_depthopt,cot_depthopt_diss,cot_depthopt_lossless,"
            "kp_cot,kd_cot,depth_cotopt,cot_cotopt_diss,depth_rigid,cot_rigid");
}

TEST(CotComparison, FailedRowKeepsItsError) {
  GridSpec g;
  g.kp_count = 5;
  g.kd_count = 5;
  const auto rows = cot_vs_depth_comparison({-10.0}, Params::make(5.0, 0.5), g);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].ok);
  EXPECT_TRUE(std::isnan(rows[0].depth_depthopt));
}

}  // namespace
}  // namespace softland
