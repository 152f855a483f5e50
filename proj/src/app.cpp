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

#include "softland/app.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "softland/cot.hpp"
#include "softland/csv.hpp"
#include "softland/energy.hpp"
#include "softland/optimize.hpp"

namespace softland {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

// Non-finite values have no JSON spelling and become null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

struct Job {
  const RunConfig& config;
  fs::path dir;
  Json headline = Json::object();
  Json outputs = Json::array();

  void emit(const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    outputs.push_back(name);
  }

  SweepOptions sweep_options() const {
    SweepOptions o;
    o.sim = config.sim;
    o.sim.record_dt = 0.0;
    o.workers = config.workers;
    o.stroke_shrink = config.stroke_shrink;
    o.refine = config.refine;
    return o;
  }

  double resolve_force_limit(bool* derived) const {
    *derived = !std::isfinite(config.params.u_max);
    if (!*derived) return config.params.u_max;
    return derive_force_limit(-10.0, config.params, config.grid, sweep_options());
  }
};

void run_simulate(Job& job) {
  const RunConfig& c = job.config;
  const double v0 = c.v0.front();
  const SimResult r = simulate(c.controller, c.params, v0, c.sim);
  const SimOutcome& o = r.outcome;
  std::ostringstream csv;
  write_trajectory_csv(csv, r.trajectory);
  job.emit("trajectory.csv", csv.str());

  Json& h = job.headline;
  h["controller"] = controller_name(c.controller);
  h["v0"] = v0;
  h["depth"] = o.depth;
  if (c.physical) h["depth_m"] = o.depth * c.scales.x_s;
  h["rest_time"] = number(o.rest_time);
  h["steps"] = o.steps;
  h["settled"] = o.settled;
  h["stroke_violation"] = o.stroke_violation;
  h["violation_time"] = number(o.violation_time);
  h["termination"] = to_string(o.termination);
  h["final_phase"] = to_string(o.final_phase);
  h["u_peak"] = o.u_peak;
  h["min_gap"] = o.min_gap;
  h["max_gap"] = o.max_gap;
  if (o.settled && !o.stroke_violation && o.has_rest()) {
    const EnergyReport e = energy_report(o, r.trajectory, c.params.r_m);
    h["energy"] = Json{{"e0", e.e0},
                       {"eT", e.eT},
                       {"e_act", e.e_act},
                       {"e_gnd", e.e_gnd},
                       {"cot_dissipative", e.cot_dissipative},
                       {"cot_lossless", e.cot_lossless},
                       {"audit_residual", e.audit_residual},
                       {"actuator_injected", e.actuator_injected}};
  }
}

void run_sweep(Job& job) {
  const RunConfig& c = job.config;
  const double v0 = c.v0.front();
  SweepOptions o = job.sweep_options();
  o.saturate = std::isfinite(c.params.u_max);
  const GridResult g = sweep_impedance(v0, c.params, c.grid, c.objective, o);
  std::ostringstream csv;
  write_grid_csv(csv, g);
  job.emit("grid.csv", csv.str());

  int feasible = 0;
  int violations = 0;
  for (const auto& cell : g.cells) {
    feasible += cell.feasible ? 1 : 0;
    violations += cell.stroke_violation ? 1 : 0;
  }
  const CellResult& a = g.cells[g.argmin];
  Json& h = job.headline;
  h["v0"] = v0;
  h["objective"] = to_string(c.objective);
  h["saturate"] = o.saturate;
  h["cells"] = g.cells.size();
  h["feasible_cells"] = feasible;
  h["stroke_violations"] = violations;
  h["argmin"] = Json{{"k_p", a.k_p}, {"k_d", a.k_d}, {"depth", a.depth},
                     {"cot", number(a.cot)}, {"steps", a.steps}};
  h["refined"] = Json{{"k_p", g.refined.k_p},
                      {"k_d", g.refined.k_d},
                      {"depth", g.refined.depth},
                      {"cot", number(g.refined.cot)},
                      {"u_peak", g.refined.cell.u_peak},
                      {"min_gap", g.refined.cell.min_gap},
                      {"evaluations", g.refined.evaluations}};
}

void run_curves(Job& job) {
  const RunConfig& c = job.config;
  SweepOptions o = job.sweep_options();
  o.saturate = std::isfinite(c.params.u_max);
  const auto rows =
      optimal_curves(c.v0, c.r_m_list, c.s_list, c.objective, c.grid, o, c.params.u_max);
  std::ostringstream csv;
  write_curves_csv(csv, rows);
  job.emit("curves.csv", csv.str());
  Json failures = Json::array();
  for (const auto& r : rows) {
    if (!r.ok) failures.push_back(Json{{"r_m", r.r_m}, {"s", r.s}, {"v0", r.v0}, {"error", r.error}});
  }
  job.headline["objective"] = to_string(c.objective);
  job.headline["rows"] = rows.size();
  job.headline["failed_rows"] = failures;
}

void run_bangbang(Job& job) {
  const RunConfig& c = job.config;
  bool derived = false;
  Params p = c.params;
  p.u_max = job.resolve_force_limit(&derived);
  BangBangOptions bb;
  bb.sim = c.sim;

  std::ostringstream csv;
  csv << "v0,n_switches,switch_times,depth,residual,rest_time,arrest_force,feasible\n";
  Json rows = Json::array();
  std::vector<BangBangSolution> solutions;
  for (double v0 : c.v0) {
    const BangBangSolution s = c.n_switches == 1 ? solve_bang_bang(v0, p, bb)
                                                 : solve_multi_switch(v0, p, c.n_switches, bb);
    std::string times;
    for (std::size_t k = 0; k < s.switch_times.size(); ++k) {
      times += (k ? ";" : "") + csv::num(s.switch_times[k]);
    }
    csv::row(csv, v0, c.n_switches, times, s.depth, s.residual, s.rest_time, s.arrest_force,
             s.feasible);
    rows.push_back(Json{{"v0", v0},
                        {"feasible", s.feasible},
                        {"depth", s.feasible ? number(s.depth) : Json(nullptr)},
                        {"switch_times", s.switch_times},
                        {"reason", s.reason}});
    solutions.push_back(s);
  }
  job.emit("bangbang.csv", csv.str());

  if (c.v0.size() == 1 && solutions.front().feasible) {
    SimOptions sim = c.sim;
    sim.stop_at_foot_stop = true;
    const SimResult r =
        simulate(BangBang{p.u_max, solutions.front().switch_times}, p, c.v0.front(), sim);
    std::ostringstream traj;
    write_trajectory_csv(traj, r.trajectory);
    job.emit("trajectory.csv", traj.str());
  }
  job.headline["u_max"] = p.u_max;
  job.headline["u_max_derived"] = derived;
  job.headline["n_switches"] = c.n_switches;
  job.headline["solutions"] = rows;
}

void run_compare(Job& job) {
  const RunConfig& c = job.config;
  BangBangOptions bb;
  bb.sim = c.sim;
  const CompareTable t = compare_policies(c.v0, c.params, c.grid, job.sweep_options(), bb);
  std::ostringstream csv;
  write_compare_csv(csv, t);
  job.emit("compare.csv", csv.str());
  bool ordered = true;
  for (const auto& r : t.rows) {
    ordered = ordered && r.bang_bang_feasible && r.depth_bang_bang <= r.depth_impedance &&
              r.depth_impedance <= r.depth_rigid;
  }
  job.headline["u_max"] = t.u_max;
  job.headline["u_max_derived"] = t.u_max_derived;
  job.headline["rows"] = t.rows.size();
  job.headline["ordering_holds"] = ordered;
}

void run_cot(Job& job) {
  const RunConfig& c = job.config;
  const auto rows = cot_vs_depth_comparison(c.v0, c.params, c.grid, job.sweep_options());
  std::ostringstream csv;
  write_cot_csv(csv, rows);
  job.emit("cot.csv", csv.str());
  Json failures = Json::array();
  Json injected = Json::array();
  for (const auto& r : rows) {
    if (!r.ok) failures.push_back(Json{{"v0", r.v0}, {"error", r.error}});
    if (r.ok && (r.cot_depthopt_diss < r.cot_depthopt_lossless ||
                 r.cot_cotopt_diss < r.cot_cotopt_lossless)) {
      injected.push_back(r.v0);
    }
  }
  job.headline["rows"] = rows.size();
  job.headline["failed_rows"] = failures;
  job.headline["actuator_injects_energy_at_v0"] = injected;
}

std::string_view error_kind(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  if (dynamic_cast<const IoError*>(&e)) return "io";
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return "io";
  if (dynamic_cast<const ModelError*>(&e)) return "model";
  if (dynamic_cast<const SimulationError*>(&e)) return "simulation";
  if (dynamic_cast<const OptimizationError*>(&e)) return "optimization";
  if (dynamic_cast<const EnergyError*>(&e)) return "energy";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "invalid_argument";
  return "internal";
}

Json inputs_echo(const RunConfig& c) {
  Json in = Json::object();
  in["mode"] = to_string(c.mode);
  for (const auto& e : c.entries) {
    if (e.key != "mode") in[e.key] = e.value;
  }
  return in;
}

}  // namespace

void write_error_record(const std::string& out_dir, std::string_view kind,
                        std::string_view message) {
  try {
    fs::create_directories(out_dir);
    const Json err{{"version", kVersion},
                   {"error", Json{{"kind", kind}, {"message", message}}}};
    write_file(fs::path(out_dir) / "error.json", err.dump(2) + "\n");
  } catch (...) {
    // The caller already reports the original failure.
  }
}

int run(const RunConfig& config, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  try {
    fs::create_directories(config.out_dir);
    std::error_code ec;
    fs::remove(fs::path(config.out_dir) / "error.json", ec);
    Job job{config, fs::path(config.out_dir)};
    switch (config.mode) {
      case Mode::Simulate:
        run_simulate(job);
        break;
      case Mode::Sweep:
        run_sweep(job);
        break;
      case Mode::Curves:
        run_curves(job);
        break;
      case Mode::BangBang:
        run_bangbang(job);
        break;
      case Mode::Compare:
        run_compare(job);
        break;
      case Mode::Cot:
        run_cot(job);
        break;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Json summary;
    summary["version"] = kVersion;
    summary["mode"] = to_string(config.mode);
    summary["inputs"] = inputs_echo(config);
    summary["params"] = Json{{"r_m", config.params.r_m},
                             {"s", config.params.s},
                             {"u_max", number(config.params.u_max)},
                             {"l0", config.params.l0}};
    summary["v0"] = config.v0;
    if (config.physical) {
      summary["scales"] = Json{{"x_s", config.scales.x_s},
                               {"tau_s", config.scales.tau_s},
                               {"u_s", config.scales.u_s}};
    } else {
      summary["scales"] = nullptr;
    }
    summary["headline"] = job.headline;
    summary["outputs"] = job.outputs;
    summary["wall_time_s"] = wall;
    write_file(job.dir / "summary.json", summary.dump(2) + "\n");
    log << "softland " << to_string(config.mode) << ": wrote";
    for (const auto& name : job.outputs) log << " " << name.get<std::string>();
    log << " summary.json to " << config.out_dir << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    const std::string_view kind = error_kind(e);
    write_error_record(config.out_dir, kind, e.what());
    log << "softland: " << kind << " error: " << e.what() << "\n";
    return kind == "config" ? kExitConfig : kExitFailure;
  }
}

}  // namespace softland
