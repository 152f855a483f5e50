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
#include <limits>

#include <gtest/gtest.h>

#include "softland/optimize.hpp"

namespace softland {
namespace {

const Params kRef = Params::make(5.0, 20.0, 8.2);

// Brute-force oracle: minimum feasible depth over a uniform scan of the
// switch time, rescanned inside the best cell. No root finding involved.
double scan_min_depth(double v0, const Params& p, int n) {
  const double hi = evaluate_bang_bang({}, v0, p).end_time;
  double lo = 0.0;
  double top = hi;
  double best = std::numeric_limits<double>::infinity();
  for (int level = 0; level < 2; ++level) {
    double best_t = -1.0;
    const double h = (top - lo) / n;
    for (int k = 0; k <= n; ++k) {
      const double t = lo + h * k;
      const BangBangSolution s = evaluate_bang_bang({t}, v0, p);
      if (s.feasible && s.depth < best) {
        best = s.depth;
        best_t = t;
      }
    }
    if (best_t < 0.0) break;
    lo = std::max(0.0, best_t - h);
    top = best_t;
  }
  return best;
}

TEST(SolveBangBang, ResidualVanishesAtTheSwitch) {
  for (double v0 : {-0.5, -1.0, -3.0, -6.0, -10.0}) {
    const BangBangSolution s = solve_bang_bang(v0, kRef);
    ASSERT_TRUE(s.feasible) << v0 << " " << s.reason;
    ASSERT_EQ(s.switch_times.size(), 1u);
    EXPECT_LE(std::abs(s.residual), 1e-8) << v0;
    EXPECT_GT(s.switch_times[0], 0.0);
    EXPECT_LT(s.switch_times[0], s.rest_time);
  }
}

TEST(SolveBangBang, AgreesWithDenseScanOracle) {
  const double root = solve_bang_bang(-3.0, kRef).depth;
  const double scan = scan_min_depth(-3.0, kRef, 10000);
  EXPECT_NEAR(scan, root, 1e-4);
  EXPECT_GE(scan, root - 1e-9);
}

TEST(SolveBangBang, PerturbedSwitchIsInfeasibleOrDeeper) {
  const BangBangSolution s = solve_bang_bang(-3.0, kRef);
  for (double dt : {-1e-3, 1e-3}) {
    const BangBangSolution e = evaluate_bang_bang({s.switch_times[0] + dt}, -3.0, kRef);
    const bool sign_change = e.residual * s.residual <= 0.0 || e.residual > 0.0;
    EXPECT_TRUE(!e.feasible || e.depth > s.depth || sign_change) << dt;
  }
}

TEST(SolveBangBang, ApproachesUnitDepthAsImpactVanishes) {
  const double d = solve_bang_bang(-0.1, kRef).depth;
  EXPECT_GE(d, 1.0);
  EXPECT_LE(d, 1.1);
  EXPECT_NEAR(solve_bang_bang(0.0, kRef).depth, 1.0, 0.01);
}

TEST(SolveBangBang, DepthNondecreasingInImpactSpeed) {
  double prev = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const BangBangSolution s = solve_bang_bang(-0.5 * k, kRef);
    ASSERT_TRUE(s.feasible);
    EXPECT_GE(s.depth, prev);
    prev = s.depth;
  }
}

TEST(SolveBangBang, RequiresFiniteForceLimit) {
  EXPECT_THROW(solve_bang_bang(-1.0, Params::make(5, 20)), OptimizationError);
  EXPECT_THROW(solve_bang_bang(0.5, kRef), OptimizationError);
}

TEST(SolveBangBang, WeakActuatorIsInfeasible) {
  const BangBangSolution s = solve_bang_bang(-10.0, Params::make(5.0, 20.0, 1.2));
  EXPECT_FALSE(s.feasible);
  EXPECT_FALSE(s.reason.empty());
}

TEST(EvaluateBangBang, CoincidentSwitchPairCancels) {
  const BangBangSolution a = evaluate_bang_bang({0.12}, -3.0, kRef);
  const BangBangSolution b = evaluate_bang_bang({0.05, 0.05, 0.12}, -3.0, kRef);
  EXPECT_EQ(a.depth, b.depth);
  EXPECT_EQ(a.residual, b.residual);
}

TEST(SolveMultiSwitch, OneSwitchRecoversSingleSolution) {
  const BangBangSolution a = solve_bang_bang(-3.0, kRef);
  const BangBangSolution b = solve_multi_switch(-3.0, kRef, 1);
  EXPECT_NEAR(a.depth, b.depth, 1e-6);
}

TEST(SolveMultiSwitch, ThreeSwitchesGainLittle) {
  const double single = solve_bang_bang(-3.0, kRef).depth;
  const BangBangSolution multi = solve_multi_switch(-3.0, kRef, 3);
  ASSERT_TRUE(multi.feasible);
  EXPECT_LE(multi.depth, single + 1e-12);
  EXPECT_LE((single - multi.depth) / single, 0.01);
}

TEST(SolveMultiSwitch, TinyStrokeIsInfeasible) {
  BangBangOptions o;
  o.starts = 5;
  o.max_evaluations = 60;
  const BangBangSolution s = solve_multi_switch(-3.0, Params::make(5.0, 0.1, 8.2), 2, o);
  EXPECT_FALSE(s.feasible);
  EXPECT_THROW(solve_multi_switch(-3.0, kRef, 0), OptimizationError);
}

TEST(NelderMead, MinimisesRosenbrock) {
  auto f = [](const std::vector<double>& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const SimplexResult r = nelder_mead(f, {-1.2, 1.0}, 0.5, 5000, 1e-10);
  EXPECT_NEAR(r.x[0], 1.0, 1e-5);
  EXPECT_NEAR(r.x[1], 1.0, 1e-5);
  EXPECT_LE(r.evaluations, 5000 + 3);
}

TEST(NelderMead, RespectsEvaluationBudget) {
  int calls = 0;
  auto f = [&](const std::vector<double>& x) {
    ++calls;
    return x[0] * x[0];
  };
  nelder_mead(f, {3.0}, 1.0, 20, 0.0);
  EXPECT_LE(calls, 20 + 2);
}

}  // namespace
}  // namespace softland
