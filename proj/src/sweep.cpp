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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "softland/csv.hpp"
#include "softland/energy.hpp"
#include "softland/optimize.hpp"
#include "softland/parallel.hpp"

namespace softland {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool better(const CellResult& a, const CellResult& b, Objective o) {
  return a.feasible && std::isfinite(a.objective(o)) &&
         (!b.feasible || a.objective(o) < b.objective(o));
}

}  // namespace

std::string_view to_string(Objective objective) {
  return objective == Objective::Depth ? "depth" : "cot";
}

Objective objective_from_string(std::string_view text) {
  if (text == "depth") return Objective::Depth;
  if (text == "cot") return Objective::Cot;
  throw std::invalid_argument("objective must be 'depth' or 'cot', got '" +
                              std::string(text) + "'");
}

void GridSpec::validate() const {
  if (kp_count < 2 || kd_count < 2) throw std::invalid_argument("grid counts must be >= 2");
  if (!(kp_max > kp_min) || !(kd_max > kd_min)) {
    throw std::invalid_argument("grid ranges must be nonempty");
  }
  if (kp_min < 0.0 || kd_min < 0.0) throw std::invalid_argument("grid gains must be >= 0");
}

double GridSpec::kp(int i) const {
  return kp_min + (kp_max - kp_min) * i / static_cast<double>(kp_count - 1);
}

double GridSpec::kd(int j) const {
  return kd_min + (kd_max - kd_min) * j / static_cast<double>(kd_count - 1);
}

const CellResult& GridResult::at(int i, int j) const {
  return cells.at(static_cast<std::size_t>(i) * grid.kd_count + j);
}

CellResult evaluate_impedance(double k_p, double k_d, double v0, const Params& params,
                              const SweepOptions& options) {
  Params run = params;
  run.s = params.s * options.stroke_shrink;
  CellResult c;
  c.k_p = k_p;
  c.k_d = k_d;
  c.cot = std::numeric_limits<double>::quiet_NaN();
  try {
    const auto result = simulate(Impedance{k_p, k_d, options.saturate}, run, v0, options.sim);
    const SimOutcome& o = result.outcome;
    c.depth = o.depth;
    c.steps = o.steps;
    c.stroke_violation = o.stroke_violation;
    c.feasible = !o.stroke_violation && o.settled;
    c.cot = cot_of(o, run, v0);
    c.u_peak = o.u_peak;
    c.min_gap = o.min_gap;
  } catch (const SimulationError&) {
    c.feasible = false;
    c.depth = kInf;
  }
  return c;
}

RefinedOptimum refine_impedance(double k_p, double k_d, double v0, const Params& params,
                                const GridSpec& grid, Objective objective,
                                const SweepOptions& options) {
  std::map<std::pair<double, double>, CellResult> cache;
  RefinedOptimum r;
  auto eval = [&](double kp, double kd) -> const CellResult& {
    auto key = std::make_pair(kp, kd);
    auto it = cache.find(key);
    if (it == cache.end()) {
      ++r.evaluations;
      it = cache.emplace(key, evaluate_impedance(kp, kd, v0, params, options)).first;
    }
    return it->second;
  };

  CellResult cur = eval(k_p, k_d);
  if (!cur.feasible) {
    std::ostringstream msg;
    msg << "refine_impedance: start (k_p=" << k_p << ", k_d=" << k_d << ") is infeasible";
    throw OptimizationError(msg.str());
  }
  double hp = (grid.kp_max - grid.kp_min) / (grid.kp_count - 1);
  double hd = (grid.kd_max - grid.kd_min) / (grid.kd_count - 1);
  for (;;) {
    const std::array<std::pair<double, double>, 4> moves{{
        {cur.k_p - hp, cur.k_d},
        {cur.k_p + hp, cur.k_d},
        {cur.k_p, cur.k_d - hd},
        {cur.k_p, cur.k_d + hd},
    }};
    const CellResult* best = nullptr;
    for (const auto& [kp, kd] : moves) {
      if (kp < grid.kp_min || kp > grid.kp_max || kd < grid.kd_min || kd > grid.kd_max) {
        continue;
      }
      const CellResult& c = eval(kp, kd);
      if (better(c, best != nullptr ? *best : cur, objective)) best = &c;
    }
    if (best != nullptr) {
      cur = *best;
      continue;
    }
    r.final_step_kp = hp;
    r.final_step_kd = hd;
    if (std::max(hp, hd) * 0.5 < options.refine_min_step) break;
    hp *= 0.5;
    hd *= 0.5;
  }
  r.k_p = cur.k_p;
  r.k_d = cur.k_d;
  r.depth = cur.depth;
  r.cot = cur.cot;
  r.value = cur.objective(objective);
  r.cell = cur;
  return r;
}

GridResult sweep_impedance(double v0, const Params& params, const GridSpec& grid,
                           Objective objective, const SweepOptions& options) {
  grid.validate();
  params.validate();
  GridResult out;
  out.grid = grid;
  out.objective = objective;
  const std::size_t n = static_cast<std::size_t>(grid.kp_count) * grid.kd_count;
  out.cells.resize(n);
  parallel_for(n, options.workers, [&](std::size_t idx) {
    const int i = static_cast<int>(idx / grid.kd_count);
    const int j = static_cast<int>(idx % grid.kd_count);
    out.cells[idx] = evaluate_impedance(grid.kp(i), grid.kd(j), v0, params, options);
  });

  // Row-major order with strict improvement breaks ties toward smaller k_p,
  // then smaller k_d.
  int stroke = 0;
  int unsettled = 0;
  for (std::size_t idx = 0; idx < n; ++idx) {
    const CellResult& c = out.cells[idx];
    if (c.stroke_violation) ++stroke;
    if (!c.feasible && !c.stroke_violation) ++unsettled;
    if (!c.feasible || !std::isfinite(c.objective(objective))) continue;
    if (out.argmin < 0 || c.objective(objective) < out.cells[out.argmin].objective(objective)) {
      out.argmin = static_cast<int>(idx);
    }
  }
  if (out.argmin < 0) {
    std::ostringstream msg;
    msg << "sweep_impedance: all " << n << " cells infeasible at v0=" << v0 << " ("
        << stroke << " violate the stroke limit s=" << params.s * options.stroke_shrink
        << ", " << unsettled << " never settle within tau_max=" << options.sim.tau_max
        << ")";
    throw OptimizationError(msg.str());
  }
  const CellResult& coarse = out.cells[out.argmin];
  if (options.refine) {
    out.refined = refine_impedance(coarse.k_p, coarse.k_d, v0, params, grid, objective, options);
  } else {
    out.refined.k_p = coarse.k_p;
    out.refined.k_d = coarse.k_d;
    out.refined.depth = coarse.depth;
    out.refined.cot = coarse.cot;
    out.refined.value = coarse.objective(objective);
    out.refined.cell = coarse;
  }
  return out;
}

std::vector<CurveRow> optimal_curves(const std::vector<double>& v0_list,
                                     const std::vector<double>& r_m_list,
                                     const std::vector<double>& s_list, Objective objective,
                                     const GridSpec& grid, const SweepOptions& options,
                                     double u_max) {
  if (v0_list.empty() || r_m_list.empty() || s_list.empty()) {
    throw std::invalid_argument("optimal_curves: parameter lists must be nonempty");
  }
  std::vector<CurveRow> rows;
  rows.reserve(v0_list.size() * r_m_list.size() * s_list.size());

  std::vector<std::size_t> order(v0_list.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(v0_list[a]) < std::abs(v0_list[b]);
  });

  SweepOptions coarse_opts = options;
  coarse_opts.refine = false;

  for (double r_m : r_m_list) {
    for (double s : s_list) {
      const Params params = Params::make(r_m, s, u_max);
      std::vector<CurveRow> curve(v0_list.size());
      bool have_prev = false;
      double prev_kp = 0.0;
      double prev_kd = 0.0;
      for (std::size_t idx : order) {
        CurveRow& row = curve[idx];
        row.r_m = r_m;
        row.s = s;
        row.v0 = v0_list[idx];
        try {
          const GridResult g = sweep_impedance(row.v0, params, grid, objective, coarse_opts);
          RefinedOptimum best = refine_impedance(g.refined.k_p, g.refined.k_d, row.v0, params,
                                                 grid, objective, options);
          if (have_prev) {
            const CellResult warm =
                evaluate_impedance(prev_kp, prev_kd, row.v0, params, options);
            if (warm.feasible) {
              RefinedOptimum alt = refine_impedance(prev_kp, prev_kd, row.v0, params, grid,
                                                    objective, options);
              if (alt.value < best.value) best = alt;
            }
          }
          row.k_p = best.k_p;
          row.k_d = best.k_d;
          row.depth = best.depth;
          row.cot = best.cot;
          row.u_peak = best.cell.u_peak;
          row.min_gap = best.cell.min_gap;
          row.ok = true;
          have_prev = true;
          prev_kp = best.k_p;
          prev_kd = best.k_d;
        } catch (const std::exception& e) {
          row.ok = false;
          row.error = e.what();
          row.depth = row.cot = std::numeric_limits<double>::quiet_NaN();
        }
      }
      rows.insert(rows.end(), curve.begin(), curve.end());
    }
  }
  return rows;
}

double derive_force_limit(double v0, const Params& params, const GridSpec& grid,
                          const SweepOptions& options) {
  SweepOptions unsat = options;
  unsat.saturate = false;
  const GridResult g = sweep_impedance(v0, params, grid, Objective::Depth, unsat);
  return g.refined.cell.u_peak;
}

CompareTable compare_policies(const std::vector<double>& v0_list, const Params& params,
                              const GridSpec& grid, const SweepOptions& options,
                              const BangBangOptions& bb) {
  if (v0_list.empty()) throw std::invalid_argument("compare_policies: empty v0 list");
  CompareTable table;
  Params p = params;
  if (std::isfinite(params.u_max)) {
    table.u_max = params.u_max;
  } else {
    table.u_max = derive_force_limit(-10.0, params, grid, options);
    table.u_max_derived = true;
  }
  p.u_max = table.u_max;

  SweepOptions sat = options;
  sat.saturate = true;
  SimOptions rigid_opts = options.sim;
  rigid_opts.record_dt = 0.0;

  for (double v0 : v0_list) {
    CompareRow row;
    row.v0 = v0;
    row.depth_rigid = simulate(Rigid{}, p, v0, rigid_opts).outcome.depth;
    const GridResult g = sweep_impedance(v0, p, grid, Objective::Depth, sat);
    row.depth_impedance = g.refined.depth;
    row.k_p = g.refined.k_p;
    row.k_d = g.refined.k_d;
    const BangBangSolution b = solve_bang_bang(v0, p, bb);
    row.bang_bang_feasible = b.feasible;
    row.depth_bang_bang = b.feasible ? b.depth : std::numeric_limits<double>::quiet_NaN();
    row.switch_time = b.switch_times.empty() ? std::numeric_limits<double>::quiet_NaN()
                                             : b.switch_times.front();
    table.rows.push_back(row);
  }
  return table;
}

void write_grid_csv(std::ostream& out, const GridResult& result) {
  out << "k_p,k_d,depth,steps,feasible\n";
  for (const auto& c : result.cells) {
    csv::row(out, c.k_p, c.k_d, c.depth, c.steps, c.feasible);
  }
}

void write_curves_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
  out << "r_m,s,v0,k_p_star,k_d_star,depth_star,cot_star\n";
  for (const auto& r : rows) {
    csv::row(out, r.r_m, r.s, r.v0, r.k_p, r.k_d, r.depth, r.cot);
  }
}

void write_compare_csv(std::ostream& out, const CompareTable& table) {
  out << "v0,depth_rigid,depth_imp,depth_bb,u_max\n";
  for (const auto& r : table.rows) {
    csv::row(out, r.v0, r.depth_rigid, r.depth_impedance, r.depth_bang_bang, table.u_max);
  }
}

}  // namespace softland
