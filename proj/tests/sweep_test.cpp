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

#include "softland/optimize.hpp"

namespace softland {
namespace {

GridSpec small_grid() {
  GridSpec g;
  g.kp_count = 21;
  g.kd_count = 21;
  return g;
}

const Params kRef = Params::make(5.0, 20.0);

TEST(GridSpec, ValidatesAndIndexes) {
  GridSpec g;
  EXPECT_NO_THROW(g.validate());
  EXPECT_EQ(g.kp(0), 0.0);
  EXPECT_EQ(g.kp(100), 1.0);
  EXPECT_DOUBLE_EQ(g.kd(18), 0.18);
  g.kd_count = 1;
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = GridSpec{};
  g.kp_max = g.kp_min;
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(Objective, ParsesNames) {
  EXPECT_EQ(objective_from_string("depth"), Objective::Depth);
  EXPECT_EQ(objective_from_string("cot"), Objective::Cot);
  EXPECT_EQ(to_string(Objective::Cot), "cot");
  EXPECT_THROW(objective_from_string("speed"), std::invalid_argument);
}

TEST(SweepImpedance, SteppedIntrusionCells) {
  GridSpec g;
  g.kp_count = 51;
  g.kd_count = 51;
  SweepOptions o;
  o.refine = false;
  const GridResult r = sweep_impedance(-1.0, kRef, g, Objective::Depth, o);
  EXPECT_EQ(r.at(10, 0).steps, 3);
  EXPECT_EQ(r.at(10, 9).steps, 2);
  EXPECT_EQ(r.at(10, 20).steps, 1);
}

TEST(SweepImpedance, ArgminIsOverFeasibleCellsAndRefinementImproves) {
  const GridResult r = sweep_impedance(-2.0, kRef, small_grid(), Objective::Depth);
  ASSERT_GE(r.argmin, 0);
  const CellResult& a = r.cells[r.argmin];
  EXPECT_TRUE(a.feasible);
  for (const auto& c : r.cells) {
    if (c.feasible) EXPECT_GE(c.depth, a.depth);
  }
  EXPECT_LE(r.refined.depth, a.depth + 1e-12);
  EXPECT_TRUE(r.refined.cell.feasible);
}

TEST(SweepImpedance, RefinedOptimumIsCompassLocalMinimum) {
  const GridSpec g = small_grid();
  const SweepOptions o;
  const GridResult r = sweep_impedance(-2.0, kRef, g, Objective::Depth, o);
  const double hp = r.refined.final_step_kp;
  const double hd = r.refined.final_step_kd;
  EXPECT_LE(std::max(hp, hd), 2.0 * o.refine_min_step);
  for (auto [dp, dd] : {std::pair{-hp, 0.0}, {hp, 0.0}, {0.0, -hd}, {0.0, hd}}) {
    const double kp = r.refined.k_p + dp;
    const double kd = r.refined.k_d + dd;
    if (kp < 0.0 || kd < 0.0 || kp > 1.0 || kd > 1.0) continue;
    const CellResult c = evaluate_impedance(kp, kd, -2.0, kRef, o);
    if (c.feasible) EXPECT_GE(c.depth, r.refined.depth);
  }
}

TEST(SweepImpedance, OptimumRidesTheStrokeBoundary) {
  for (double v0 : {-1.0, -4.0}) {
    const GridResult r = sweep_impedance(v0, kRef, small_grid(), Objective::Depth);
    EXPECT_LT(r.refined.cell.min_gap, 0.02 * kRef.s) << v0;
  }
}

TEST(SweepImpedance, NearZeroImpactDepthBetweenSupportAndRigid) {
  const GridResult r = sweep_impedance(-1e-6, kRef, small_grid(), Objective::Depth);
  EXPECT_GT(r.refined.depth, 1.0);
  EXPECT_LT(r.refined.depth, 2.0);
}

TEST(SweepImpedance, IndependentOfWorkerCount) {
  SweepOptions one;
  one.workers = 1;
  SweepOptions many;
  many.workers = 3;
  const GridResult a = sweep_impedance(-3.0, kRef, small_grid(), Objective::Depth, one);
  const GridResult b = sweep_impedance(-3.0, kRef, small_grid(), Objective::Depth, many);
  std::ostringstream sa, sb;
  write_grid_csv(sa, a);
  write_grid_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(a.refined.depth, b.refined.depth);
}

TEST(SweepImpedance, ArgminIsFirstMinimalCellInRowMajorOrder) {
  SweepOptions o;
  o.refine = false;
  const GridResult full = sweep_impedance(-1.0, kRef, small_grid(), Objective::Depth, o);
  int first = -1;
  for (std::size_t i = 0; i < full.cells.size(); ++i) {
    if (full.cells[i].feasible && full.cells[i].depth == full.cells[full.argmin].depth) {
      first = static_cast<int>(i);
      break;
    }
  }
  EXPECT_EQ(first, full.argmin);
}

TEST(SweepImpedance, AllInfeasibleNamesTheConstraint) {
  try {
    sweep_impedance(-10.0, Params::make(5.0, 0.5), small_grid(), Objective::Depth);
    FAIL() << "expected OptimizationError";
  } catch (const OptimizationError& e) {
    EXPECT_NE(std::string(e.what()).find("stroke"), std::string::npos) << e.what();
  }
}

TEST(SweepImpedance, StrokeShrinkOnlyTightensTheStroke) {
  SweepOptions o;
  o.stroke_shrink = 0.5;
  const CellResult c = evaluate_impedance(0.2, 0.4, -1.0, kRef, o);
  const CellResult d = evaluate_impedance(0.2, 0.4, -1.0, Params::make(5.0, 10.0), SweepOptions{});
  // Same l0, smaller stroke: identical dynamics unless the tighter limit is hit.
  EXPECT_NE(c.depth, d.depth);
  const CellResult e = evaluate_impedance(0.2, 0.4, -1.0, kRef, SweepOptions{});
  EXPECT_EQ(c.depth, e.depth);
}

TEST(RefineImpedance, RejectsInfeasibleStart) {
  EXPECT_THROW(refine_impedance(0.0, 0.0, -3.0, kRef, small_grid(), Objective::Depth, {}),
               OptimizationError);
}

TEST(OptimalCurves, SingleElementListsGiveOneRow) {
  const auto rows = optimal_curves({-1.0}, {5.0}, {20.0}, Objective::Depth, small_grid());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].ok);
  EXPECT_EQ(rows[0].r_m, 5.0);
  EXPECT_GT(rows[0].depth, 1.0);
}

TEST(OptimalCurves, RowErrorsDoNotAbortTheTable) {
  const auto rows =
      optimal_curves({-10.0, -1.0}, {5.0}, {0.5, 20.0}, Objective::Depth, small_grid());
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_FALSE(rows[0].ok);
  EXPECT_FALSE(rows[0].error.empty());
  EXPECT_TRUE(rows[3].ok);
  EXPECT_EQ(rows[2].s, 20.0);
  EXPECT_EQ(rows[2].v0, -10.0);
}

TEST(OptimalCurves, StiffnessGrowsWithImpactSpeed) {
  const auto rows =
      optimal_curves({-2.0, -5.0, -8.0}, {5.0}, {20.0}, Objective::Depth, small_grid());
  EXPECT_LE(rows[0].k_p, rows[1].k_p + 1e-3);
  EXPECT_LE(rows[1].k_p, rows[2].k_p + 1e-3);
}

TEST(ComparePolicies, OrderingWithExplicitLimit) {
  const CompareTable t =
      compare_policies({-1.0, -5.0}, Params::make(5.0, 20.0, 8.2), small_grid());
  EXPECT_FALSE(t.u_max_derived);
  EXPECT_EQ(t.u_max, 8.2);
  for (const auto& r : t.rows) {
    EXPECT_TRUE(r.bang_bang_feasible);
    EXPECT_LE(r.depth_bang_bang, r.depth_impedance);
    EXPECT_LE(r.depth_impedance, r.depth_rigid);
    EXPECT_LE(r.depth_bang_bang, 0.5 * r.depth_rigid);
  }
  std::ostringstream out;
  write_compare_csv(out, t);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "v0,depth_rigid,depth_imp,depth_bb,u_max");
}

TEST(ComparePolicies, DerivesLimitWhenUnbounded) {
  const CompareTable t = compare_policies({-2.0}, kRef, small_grid());
  EXPECT_TRUE(t.u_max_derived);
  EXPECT_TRUE(std::isfinite(t.u_max));
  EXPECT_GT(t.u_max, 1.0);
}

TEST(CurvesCsv, Header) {
  std::ostringstream out;
  write_curves_csv(out, {});
  EXPECT_EQ(out.str(), "r_m,s,v0,k_p_star,k_d_star,depth_star,cot_star\n");
}

}  // namespace
}  // namespace softland
