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

#include "softland/cot.hpp"

#include <limits>
#include <ostream>
#include <stdexcept>

#include "softland/csv.hpp"

namespace softland {

EnergyReport impedance_energy(double k_p, double k_d, double v0, const Params& params,
                              const SweepOptions& options) {
  Params run = params;
  run.s = params.s * options.stroke_shrink;
  const auto r = simulate(Impedance{k_p, k_d, options.saturate}, run, v0, options.sim);
  return energy_report(r.outcome, r.trajectory, run.r_m);
}

std::vector<CotRow> cot_vs_depth_comparison(const std::vector<double>& v0_list,
                                            const Params& params, const GridSpec& grid,
                                            const SweepOptions& options) {
  if (v0_list.empty()) throw std::invalid_argument("cot_vs_depth_comparison: empty v0 list");
  std::vector<CotRow> rows;
  rows.reserve(v0_list.size());
  SimOptions rigid_opts = options.sim;
  rigid_opts.record_dt = 0.0;
  for (double v0 : v0_list) {
    CotRow row;
    row.v0 = v0;
    try {
      const GridResult by_depth = sweep_impedance(v0, params, grid, Objective::Depth, options);
      const EnergyReport ed =
          impedance_energy(by_depth.refined.k_p, by_depth.refined.k_d, v0, params, options);
      row.kp_depth = by_depth.refined.k_p;
      row.kd_depth = by_depth.refined.k_d;
      row.depth_depthopt = by_depth.refined.depth;
      row.cot_depthopt_diss = ed.cot_dissipative;
      row.cot_depthopt_lossless = ed.cot_lossless;

      // The cost landscape has several basins, so the refinement also starts
      // from the depth optimum and the lower cost wins.
      const GridResult by_cot = sweep_impedance(v0, params, grid, Objective::Cot, options);
      RefinedOptimum best = by_cot.refined;
      if (options.refine) {
        const RefinedOptimum alt = refine_impedance(by_depth.refined.k_p, by_depth.refined.k_d,
                                                    v0, params, grid, Objective::Cot, options);
        if (alt.value < best.value) best = alt;
      }
      const EnergyReport ec = impedance_energy(best.k_p, best.k_d, v0, params, options);
      row.kp_cot = best.k_p;
      row.kd_cot = best.k_d;
      row.depth_cotopt = best.depth;
      row.cot_cotopt_diss = ec.cot_dissipative;
      row.cot_cotopt_lossless = ec.cot_lossless;

      const auto rigid = simulate(Rigid{}, params, v0, rigid_opts);
      const EnergyReport er = energy_report(rigid.outcome, rigid.trajectory, params.r_m);
      row.depth_rigid = rigid.outcome.depth;
      row.cot_rigid = er.cot_lossless;
      row.ok = true;
    } catch (const std::exception& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row = CotRow{};
      row.v0 = v0;
      for (double* f : {&row.kp_depth, &row.kd_depth, &row.depth_depthopt,
                        &row.cot_depthopt_diss, &row.cot_depthopt_lossless, &row.kp_cot,
                        &row.kd_cot, &row.depth_cotopt, &row.cot_cotopt_diss,
                        &row.cot_cotopt_lossless, &row.depth_rigid, &row.cot_rigid}) {
        *f = nan;
      }
      row.error = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

void write_cot_csv(std::ostream& out, const std::vector<CotRow>& rows) {
  out << "v0,kp_depth,kd_depth,depth_depthopt,cot_depthopt_diss,cot_depthopt_lossless,"
         "kp_cot,kd_cot,depth_cotopt,cot_cotopt_diss,depth_rigid,cot_rigid\n";
  for (const auto& r : rows) {
    csv::row(out, r.v0, r.kp_depth, r.kd_depth, r.depth_depthopt, r.cot_depthopt_diss,
             r.cot_depthopt_lossless, r.kp_cot, r.kd_cot, r.depth_cotopt, r.cot_cotopt_diss,
             r.depth_rigid, r.cot_rigid);
  }
}

}  // namespace softland
