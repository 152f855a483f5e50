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

// Open-loop bang-bang landing profiles and impedance gain search.

#pragma once

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "softland/model.hpp"
#include "softland/sim.hpp"

namespace softland {

class OptimizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Bang-bang force profiles
// ---------------------------------------------------------------------------

struct BangBangSolution {
  std::vector<double> switch_times;
  double depth = 0.0;
  double residual = 0.0;  // terminal residual at foot rest
  double rest_time = 0.0;
  double end_time = 0.0;  // foot stop or stroke violation, whichever ended the run
  double arrest_force = 0.0;  // u_b held after the foot rests
  bool feasible = false;
  std::string reason;  // why the solution is infeasible, empty otherwise
};

struct BangBangOptions {
  SimOptions sim{};
  /// Samples of the switch time used to bracket the terminal root.
  int scan_points = 64;
  /// Bisection stops once the switch-time bracket is this narrow.
  double switch_tol = 1e-13;
  /// Multi-switch search: number of simplex starts and their budget.
  int starts = 6;
  int max_evaluations = 400;
};

/// Evaluates one switch-time vector: simulate +-u_max until the foot first
/// stops, then check the stroke and the terminal residual. `feasible` means
/// no stroke violation anywhere and a nonpositive residual.
BangBangSolution evaluate_bang_bang(const std::vector<double>& switch_times, double v0,
                                    const Params& params, const SimOptions& sim = {});

/// Single switch from +u_max to -u_max placed where the terminal residual
/// vanishes.
BangBangSolution solve_bang_bang(double v0, const Params& params,
                                 const BangBangOptions& options = {});

/// Minimum depth over `n_switches` ascending switch times. The final switch
/// is placed on the terminal root; the earlier ones are searched by a
/// Nelder-Mead simplex with multistart around the single-switch solution.
BangBangSolution solve_multi_switch(double v0, const Params& params, int n_switches,
                                    const BangBangOptions& options = {});

// ---------------------------------------------------------------------------
// Derivative-free minimisation
// ---------------------------------------------------------------------------

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> start, double initial_step,
                          int max_evaluations, double x_tol = 1e-9);

// ---------------------------------------------------------------------------
// Impedance gain sweeps
// ---------------------------------------------------------------------------

enum class Objective { Depth, Cot };

std::string_view to_string(Objective objective);
Objective objective_from_string(std::string_view text);

struct GridSpec {
  double kp_min = 0.0;
  double kp_max = 1.0;
  int kp_count = 101;
  double kd_min = 0.0;
  double kd_max = 1.0;
  int kd_count = 101;

  void validate() const;
  double kp(int i) const;
  double kd(int j) const;
};

struct SweepOptions {
  SimOptions sim{.record_dt = 0.0};
  unsigned workers = 0;
  /// Fraction of the stroke treated as usable during optimisation.
  double stroke_shrink = 1.0;
  bool saturate = false;
  bool refine = true;
  double refine_min_step = 1e-4;
};

struct CellResult {
  double k_p = 0.0;
  double k_d = 0.0;
  double depth = 0.0;
  int steps = 0;
  bool feasible = false;
  bool stroke_violation = false;
  double cot = 0.0;  // dissipative, NaN without a rest time
  double u_peak = 0.0;
  double min_gap = 0.0;

  double objective(Objective o) const { return o == Objective::Depth ? depth : cot; }
};

struct RefinedOptimum {
  double k_p = 0.0;
  double k_d = 0.0;
  double depth = 0.0;
  double cot = 0.0;
  double value = 0.0;  // objective value at the optimum
  double final_step_kp = 0.0;
  double final_step_kd = 0.0;
  int evaluations = 0;
  CellResult cell;
};

struct GridResult {
  GridSpec grid;
  Objective objective = Objective::Depth;
  std::vector<CellResult> cells;  // row-major: index = i * kd_count + j
  int argmin = -1;
  RefinedOptimum refined;

  const CellResult& at(int i, int j) const;
};

/// Evaluates one gain pair with the sweep's conventions.
CellResult evaluate_impedance(double k_p, double k_d, double v0, const Params& params,
                              const SweepOptions& options);

/// Full grid, coarse argmin over feasible cells, then pattern-search
/// refinement inside the grid box. Throws when every cell is infeasible.
GridResult sweep_impedance(double v0, const Params& params, const GridSpec& grid,
                           Objective objective, const SweepOptions& options = {});

/// Compass search from a feasible (k_p, k_d) with step halving; keeps to the
/// feasible region and the grid box. Throws when the start is infeasible.
RefinedOptimum refine_impedance(double k_p, double k_d, double v0, const Params& params,
                                const GridSpec& grid, Objective objective,
                                const SweepOptions& options);

struct CurveRow {
  double r_m = 0.0;
  double s = 0.0;
  double v0 = 0.0;
  double k_p = 0.0;
  double k_d = 0.0;
  double depth = 0.0;
  double cot = 0.0;
  double u_peak = 0.0;
  double min_gap = 0.0;
  bool ok = false;
  std::string error;
};

/// Optimal gains along v0 for every (r_m, s) pair. Rows follow the input
/// order (r_m outer, s, then v0); refinement along each curve is warm
/// started from the neighbouring |v0|.
std::vector<CurveRow> optimal_curves(const std::vector<double>& v0_list,
                                     const std::vector<double>& r_m_list,
                                     const std::vector<double>& s_list, Objective objective,
                                     const GridSpec& grid = {},
                                     const SweepOptions& options = {},
                                     double u_max = kUnbounded);

struct CompareRow {
  double v0 = 0.0;
  double depth_rigid = 0.0;
  double depth_impedance = 0.0;
  double depth_bang_bang = 0.0;
  double k_p = 0.0;
  double k_d = 0.0;
  double switch_time = 0.0;
  bool bang_bang_feasible = false;
};

struct CompareTable {
  double u_max = 0.0;
  bool u_max_derived = false;
  std::vector<CompareRow> rows;
};

/// Rigid vs optimal impedance vs single-switch bang-bang depth. When
/// params.u_max is unbounded the force limit is taken as the peak force of
/// the unsaturated depth-optimal impedance controller at v0 = -10.
CompareTable compare_policies(const std::vector<double>& v0_list, const Params& params,
                              const GridSpec& grid = {}, const SweepOptions& options = {},
                              const BangBangOptions& bb = {});

/// Peak |u| of the unsaturated depth-optimal impedance controller at v0.
double derive_force_limit(double v0, const Params& params, const GridSpec& grid,
                          const SweepOptions& options);

void write_grid_csv(std::ostream& out, const GridResult& result);
void write_curves_csv(std::ostream& out, const std::vector<CurveRow>& rows);
void write_compare_csv(std::ostream& out, const CompareTable& table);

}  // namespace softland
