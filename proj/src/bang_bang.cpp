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
#include <cmath>
#include <limits>

#include "softland/optimize.hpp"

namespace softland {

namespace {

constexpr double kInfeasiblePenalty = 1e3;

SimOptions stop_at_rest(SimOptions sim) {
  sim.stop_at_foot_stop = true;
  sim.record_dt = 0.0;
  return sim;
}

// A switch pair at the same instant cancels out.
std::vector<double> canonical(const std::vector<double>& times) {
  std::vector<double> out;
  for (double t : times) {
    if (!out.empty() && t <= out.back()) {
      out.pop_back();
    } else {
      out.push_back(t);
    }
  }
  return out;
}

// Status of a candidate while scanning the last switch time.
enum class Side { Invalid, Short, Feasible };

Side side_of(const BangBangSolution& s) {
  if (s.feasible) return Side::Feasible;
  if (s.reason == "terminal constraint") return Side::Short;
  return Side::Invalid;
}

// Places the last switch after `prefix` on the boundary of the feasible set
// that gives the shallowest rest depth.
BangBangSolution solve_last_switch(const std::vector<double>& prefix, double v0,
                                   const Params& params, const SimOptions& sim,
                                   int scan_points, double switch_tol) {
  const double lo = prefix.empty() ? 0.0 : prefix.back();
  BangBangSolution without = evaluate_bang_bang(prefix, v0, params, sim);
  // A switch after the run has ended cannot change it.
  const double hi = without.end_time;
  if (hi <= lo) return without;

  auto with_last = [&](double t) {
    std::vector<double> times = prefix;
    times.push_back(t);
    return evaluate_bang_bang(times, v0, params, sim);
  };

  BangBangSolution best;
  best.feasible = false;
  best.depth = std::numeric_limits<double>::infinity();
  best.reason = "no switch time satisfies the terminal constraint";
  bool any_valid = false;

  auto consider = [&](const BangBangSolution& s) {
    if (s.feasible && s.depth < best.depth) best = s;
  };

  std::vector<double> ts(scan_points + 1);
  std::vector<BangBangSolution> sol(scan_points + 1);
  for (int k = 0; k <= scan_points; ++k) {
    // Skip the exact endpoints; they duplicate the neighbouring profiles.
    const double frac = (k + 0.5) / (scan_points + 1.0);
    ts[k] = lo + (hi - lo) * frac;
    sol[k] = with_last(ts[k]);
    if (side_of(sol[k]) != Side::Invalid) any_valid = true;
    consider(sol[k]);
  }
  for (int k = 0; k < scan_points; ++k) {
    const Side a = side_of(sol[k]);
    const Side b = side_of(sol[k + 1]);
    if ((a == Side::Feasible) == (b == Side::Feasible)) continue;
    double t_bad = a == Side::Feasible ? ts[k + 1] : ts[k];
    double t_good = a == Side::Feasible ? ts[k] : ts[k + 1];
    BangBangSolution good = a == Side::Feasible ? sol[k] : sol[k + 1];
    while (std::abs(t_good - t_bad) > switch_tol) {
      const double mid = 0.5 * (t_good + t_bad);
      if (mid == t_good || mid == t_bad) break;
      BangBangSolution s = with_last(mid);
      if (s.feasible) {
        t_good = mid;
        good = s;
      } else {
        t_bad = mid;
      }
    }
    consider(good);
  }
  if (!best.feasible && !any_valid) {
    best.reason = "stroke violated at every candidate switch time";
  }
  return best;
}

}  // namespace

BangBangSolution evaluate_bang_bang(const std::vector<double>& switch_times, double v0,
                                    const Params& params, const SimOptions& sim) {
  BangBangSolution out;
  out.switch_times = switch_times;
  out.rest_time = std::numeric_limits<double>::quiet_NaN();
  const std::vector<double> times = canonical(switch_times);
  const auto result =
      simulate(BangBang{params.u_max, times}, params, v0, stop_at_rest(sim));
  const SimOutcome& o = result.outcome;
  out.depth = o.depth;
  out.end_time = o.final_state.tau;
  if (o.stroke_violation) {
    out.reason = "stroke";
    return out;
  }
  if (o.termination != Termination::FootStopped) {
    out.reason = "foot never stops";
    return out;
  }
  out.rest_time = o.rest_time;
  const State& rest = o.rest_state;
  if (!(rest.gap() > 0.0)) {
    out.reason = "stroke";
    return out;
  }
  out.arrest_force = body_arrest_force(rest.x_b, rest.v_b, rest.x_f, params.r_m);
  out.residual = terminal_residual(rest, params.r_m);
  // Holding u_b on a rising body drives it out through the top of the stroke.
  if (rest.v_b > 0.0) {
    out.reason = "arrest leaves stroke";
    return out;
  }
  if (out.residual > 0.0) {
    out.reason = "terminal constraint";
    return out;
  }
  out.feasible = true;
  return out;
}

BangBangSolution solve_bang_bang(double v0, const Params& params,
                                 const BangBangOptions& options) {
  if (!std::isfinite(params.u_max)) {
    throw OptimizationError("solve_bang_bang: u_max must be finite");
  }
  if (!(v0 <= 0.0)) throw OptimizationError("solve_bang_bang: v0 must be <= 0");
  return solve_last_switch({}, v0, params, options.sim, options.scan_points,
                           options.switch_tol);
}

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> start, double initial_step,
                          int max_evaluations, double x_tol) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> pts(n + 1, start);
  std::vector<double> val(n + 1);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += initial_step;
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };
  for (std::size_t i = 0; i <= n; ++i) val[i] = eval(pts[i]);

  std::vector<std::size_t> order(n + 1);
  while (evals < max_evaluations) {
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    double size = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t d = 0; d < n; ++d) {
        size = std::max(size, std::abs(pts[i][d] - pts[best][d]));
      }
    }
    if (size < x_tol) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[i][d] / static_cast<double>(n);
    }
    auto along = [&](double coef) {
      std::vector<double> x(n);
      for (std::size_t d = 0; d < n; ++d) {
        x[d] = centroid[d] + coef * (pts[worst][d] - centroid[d]);
      }
      return x;
    };

    const auto xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < val[best]) {
      const auto xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
      continue;
    }
    if (fr < val[second]) {
      pts[worst] = xr;
      val[worst] = fr;
      continue;
    }
    const bool outside = fr < val[worst];
    const auto xc = along(outside ? -0.5 : 0.5);
    const double fc = eval(xc);
    if (fc < (outside ? fr : val[worst])) {
      pts[worst] = xc;
      val[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t d = 0; d < n; ++d) {
        pts[i][d] = pts[best][d] + 0.5 * (pts[i][d] - pts[best][d]);
      }
      val[i] = eval(pts[i]);
    }
  }
  const auto it = std::min_element(val.begin(), val.end());
  SimplexResult r;
  r.x = pts[static_cast<std::size_t>(it - val.begin())];
  r.value = *it;
  r.evaluations = evals;
  return r;
}

BangBangSolution solve_multi_switch(double v0, const Params& params, int n_switches,
                                    const BangBangOptions& options) {
  if (n_switches < 1) throw OptimizationError("solve_multi_switch: n_switches must be >= 1");
  const BangBangSolution single = solve_bang_bang(v0, params, options);
  if (n_switches == 1) return single;

  // Searching uses a coarser root tolerance; the winner is re-solved exactly.
  const double search_tol = std::max(options.switch_tol, 1e-9);
  const int search_scan = std::max(16, options.scan_points / 2);
  const int free_dims = n_switches - 1;

  auto solve_prefix = [&](const std::vector<double>& prefix, double tol, int scan) {
    return solve_last_switch(prefix, v0, params, options.sim, scan, tol);
  };
  auto objective = [&](const std::vector<double>& prefix) {
    double penalty = 0.0;
    double prev = 0.0;
    for (double t : prefix) {
      if (t < prev) penalty += prev - t;
      prev = std::max(prev, t);
    }
    if (penalty > 0.0) return kInfeasiblePenalty + penalty;
    const BangBangSolution s = solve_prefix(prefix, search_tol, search_scan);
    return s.feasible ? s.depth : kInfeasiblePenalty;
  };

  // Seeds: a short extra pulse at several fractions of the single-switch
  // time, collapsing onto the single-switch profile when its width is zero.
  const double tau_star = single.feasible && !single.switch_times.empty()
                              ? single.switch_times.front()
                              : 0.5;
  BangBangSolution best = single;
  const int starts = std::max(5, options.starts);
  for (int k = 0; k < starts; ++k) {
    const double frac = (k + 1.0) / (starts + 1.0);
    std::vector<double> seed(free_dims);
    for (int d = 0; d < free_dims; ++d) {
      seed[d] = tau_star * frac + 0.02 * tau_star * d;
    }
    const SimplexResult r =
        nelder_mead(objective, seed, 0.1 * tau_star, options.max_evaluations, 1e-7);
    if (r.value >= kInfeasiblePenalty) continue;
    BangBangSolution s = solve_prefix(r.x, options.switch_tol, options.scan_points);
    if (s.feasible && (!best.feasible || s.depth < best.depth)) best = s;
  }
  return best;
}

}  // namespace softland
