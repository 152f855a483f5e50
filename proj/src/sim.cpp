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

#include "softland/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "softland/csv.hpp"

namespace softland {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxEventsAtOneInstant = 64;
constexpr int kMaxEvents = 100000;

using Vec = std::array<double, 6>;

Vec pack(const State& s) { return {s.x_b, s.v_b, s.x_f, s.v_f, s.w_act, s.w_gnd}; }

State unpack(const Vec& y, double tau) {
  State s;
  s.x_b = y[0];
  s.v_b = y[1];
  s.x_f = y[2];
  s.v_f = y[3];
  s.w_act = y[4];
  s.w_gnd = y[5];
  s.tau = tau;
  return s;
}

enum class Guard { StrokeLow, StrokeHigh, FootStop, Yield, Lift, Touchdown, Apex };

struct GuardSet {
  std::array<Guard, 4> id{};
  std::array<double, 4> value{};
  int size = 0;
  void add(Guard g, double v) {
    id[size] = g;
    value[size] = v;
    ++size;
  }
};

// Holds the mutable pieces of one run: current phase, bang-bang segment and
// the bookkeeping that ends up in SimOutcome.
class Runner {
 public:
  Runner(const Controller& controller, const Params& params, const SimOptions& options)
      : params_(params), options_(options) {
    impedance_ = std::get_if<Impedance>(&controller);
    bang_ = std::get_if<BangBang>(&controller);
    constant_ = std::get_if<ConstantForce>(&controller);
    rigid_ = std::holds_alternative<Rigid>(controller);
  }

  SimResult run(double v0);

 private:
  double force(const State& s) const {
    if (impedance_ != nullptr) {
      double u = -impedance_->k_p * (s.gap() - params_.l0) -
                 impedance_->k_d * (s.v_b - (phase_ == Phase::Static ? 0.0 : s.v_f));
      if (impedance_->saturate && std::isfinite(params_.u_max)) {
        u = std::clamp(u, -params_.u_max, params_.u_max);
      }
      return u;
    }
    if (bang_ != nullptr) return bang_bang_force(bang_->u_max, switches_);
    if (constant_ != nullptr) return constant_->u;
    return rigid_internal_force(s, phase_, params_.r_m);
  }

  // Force used when deciding the phase of a foot at rest; the rigid lock
  // transmits exactly the body weight once the pair stops.
  double rest_force(const State& s) const {
    return rigid_ ? params_.body_fraction() : force(s);
  }

  void rhs(double t, const Vec& y, Vec& dy) const {
    const State s = unpack(y, t);
    const Derivative d =
        rigid_ ? rigid_dynamics(s, phase_) : dynamics(s, force(s), phase_, params_.r_m);
    dy = {d.x_b, d.v_b, d.x_f, d.v_f, d.w_act, d.w_gnd};
  }

  GuardSet guards(const State& s) const {
    GuardSet g;
    if (!rigid_) {
      g.add(Guard::StrokeLow, -s.gap());
      g.add(Guard::StrokeHigh, s.gap() - params_.s);
    }
    switch (phase_) {
      case Phase::Yielding:
        g.add(Guard::FootStop, s.v_f);
        break;
      case Phase::Static:
        if (!rigid_ && bang_ == nullptr && constant_ == nullptr) {
          const double needed = required_support(force(s), params_.r_m);
          g.add(Guard::Yield, needed + s.x_f - kYieldGuard);
          g.add(Guard::Lift, -needed - kYieldGuard);
        }
        break;
      case Phase::Flight:
        g.add(Guard::Touchdown, -s.x_f);
        g.add(Guard::Apex, -s.v_f);
        break;
    }
    return g;
  }

  double gamma(const State& s, double u) const {
    return grf(s.x_f, s.v_f, phase_, required_support(rigid_ ? params_.body_fraction() : u,
                                                       params_.r_m));
  }

  void track(const State& s) {
    min_x_f_ = std::min(min_x_f_, s.x_f);
    const double u = force(s);
    u_peak_ = std::max(u_peak_, std::abs(u));
    min_gap_ = std::min(min_gap_, s.gap());
    max_gap_ = std::max(max_gap_, s.gap());
  }

  void push_sample(const State& s) {
    Sample smp;
    smp.tau = s.tau;
    smp.state = s;
    smp.phase = phase_;
    smp.u = force(s);
    smp.gamma = gamma(s, smp.u);
    auto& samples = traj_.samples;
    if (!samples.empty() && !(s.tau > samples.back().tau)) {
      samples.back() = smp;
    } else {
      samples.push_back(smp);
    }
  }

  void record_event(double tau, EventKind kind, Phase from, Phase to) {
    traj_.events.push_back({tau, kind, from, to});
  }

  // Switches phase, recording the event and snapping the foot velocity.
  void enter(Phase next, State& s) {
    if (next == phase_) return;
    const Phase prev = phase_;
    phase_ = next;
    if (next == Phase::Static) {
      s.v_f = 0.0;
      if (rigid_) s.v_b = 0.0;
      rest_entry_ = s.tau;
      rest_state_ = s;
    }
    record_event(s.tau, EventKind::PhaseChange, prev, next);
    push_sample(s);
  }

  bool certified_rest(const State& s) const;
  bool settle_check(const State& s);

  const Params& params_;
  const SimOptions& options_;
  const Impedance* impedance_ = nullptr;
  const BangBang* bang_ = nullptr;
  const ConstantForce* constant_ = nullptr;
  bool rigid_ = false;

  Phase phase_ = Phase::Yielding;
  std::size_t switches_ = 0;
  Trajectory traj_;
  double min_x_f_ = 0.0;
  double u_peak_ = 0.0;
  double min_gap_ = std::numeric_limits<double>::infinity();
  double max_gap_ = -std::numeric_limits<double>::infinity();
  double rest_entry_ = kNaN;
  State rest_state_;
  bool balance_prev_ = false;
};

// Lyapunov certificate for impedance control with the foot held: the body is
// a linear mass-spring-damper whose energy about equilibrium never grows, so
// bounding the force swing by that energy proves the foot stays inside the
// static cone and the body inside the stroke for all later time.
bool Runner::certified_rest(const State& s) const {
  if (impedance_ == nullptr || phase_ != Phase::Static) return false;
  const double k_p = impedance_->k_p;
  const double k_d = impedance_->k_d;
  if (!(k_p > 0.0)) return false;
  const double m = params_.body_fraction();
  const double gap_eq = params_.l0 - m / k_p;
  const double e = s.gap() - gap_eq;
  const double energy = 0.5 * m * s.v_b * s.v_b + 0.5 * k_p * e * e;
  const double amp = std::sqrt(2.0 * energy / k_p);
  const double swing = k_p * amp + k_d * std::sqrt(2.0 * energy / m);
  if (!(1.0 + swing < -s.x_f + kYieldGuard)) return false;
  if (!(1.0 - swing > -kYieldGuard)) return false;
  if (gap_eq - amp < 0.0 || gap_eq + amp > params_.s) return false;
  if (impedance_->saturate && std::isfinite(params_.u_max)) {
    if (m + swing > params_.u_max || m - swing < -params_.u_max) return false;
  }
  return true;
}

bool Runner::settle_check(const State& s) {
  if (phase_ != Phase::Static) {
    balance_prev_ = false;
    return false;
  }
  if (rigid_) return true;
  if (certified_rest(s)) return true;
  const bool balanced = std::abs(s.v_b) < options_.settle_vel &&
                        std::abs(force(s) - params_.body_fraction()) < options_.settle_vel;
  const bool settled = balanced && balance_prev_;
  balance_prev_ = balanced;
  return settled;
}

SimResult Runner::run(double v0) {
  State s = State::impact(params_, v0);
  traj_.event_tol = options_.event_tol;
  phase_ = classify(s, rest_force(s), params_.r_m);
  if (phase_ == Phase::Static) {
    rest_entry_ = 0.0;
    rest_state_ = s;
  }
  push_sample(s);
  track(s);

  StepControl ctl;
  ctl.rel_tol = options_.rel_tol;
  ctl.abs_tol = options_.abs_tol;
  DormandPrince<6> stepper(ctl);
  auto f = [this](double t, const Vec& y, Vec& dy) { rhs(t, y, dy); };

  SimOutcome out;
  out.violation_time = kNaN;
  Termination term = Termination::Horizon;
  double next_record = options_.record_dt > 0.0 ? options_.record_dt : kNaN;
  int events_total = 0;
  int events_here = 0;
  double last_event_tau = -1.0;

  auto next_switch = [&]() {
    if (bang_ == nullptr || switches_ >= bang_->switch_times.size()) {
      return std::numeric_limits<double>::infinity();
    }
    return bang_->switch_times[switches_];
  };

  // Bang-bang switch times at or before the impact take effect immediately.
  while (next_switch() <= 0.0) ++switches_;
  if (bang_ != nullptr) {
    phase_ = classify(s, rest_force(s), params_.r_m);
    traj_.samples.back().phase = phase_;
    traj_.samples.back().u = force(s);
  }

  bool done = settle_check(s);
  if (done) term = Termination::Settled;

  while (!done) {
    stepper.reset(s.tau, pack(s), f);
    for (;;) {
      const double limit = std::min(options_.tau_max, next_switch());
      try {
        stepper.step(limit, f);
      } catch (const IntegrationError& err) {
        throw SimulationError(err.what(), s);
      }
      const double t0 = stepper.t0();
      const double t1 = stepper.t1();

      // Guard scan on the dense output, earliest crossing wins.
      constexpr int kProbes = 4;
      std::array<State, kProbes + 1> probe;
      std::array<GuardSet, kProbes + 1> gs;
      for (int k = 0; k <= kProbes; ++k) {
        const double t = k == kProbes ? t1 : t0 + (t1 - t0) * k / kProbes;
        probe[k] = unpack(k == 0 ? stepper.y0() : (k == kProbes ? stepper.y1() : stepper.dense(t)), t);
        gs[k] = guards(probe[k]);
      }
      double hit_time = std::numeric_limits<double>::infinity();
      Guard hit{};
      for (int j = 0; j < gs[0].size; ++j) {
        for (int k = 0; k < kProbes; ++k) {
          if (gs[k].value[j] < 0.0 && gs[k + 1].value[j] >= 0.0) {
            double lo = probe[k].tau;
            double hi = probe[k + 1].tau;
            if (lo >= hit_time) break;
            while (hi - lo > options_.event_tol) {
              const double mid = 0.5 * (lo + hi);
              if (mid <= lo || mid >= hi) break;
              const State sm = unpack(stepper.dense(mid), mid);
              if (guards(sm).value[j] >= 0.0) {
                hi = mid;
              } else {
                lo = mid;
              }
            }
            if (hi < hit_time) {
              hit_time = hi;
              hit = gs[0].id[j];
            }
            break;
          }
        }
      }

      const double t_end = std::isfinite(hit_time) ? hit_time : t1;
      for (int k = 0; k <= kProbes && probe[k].tau <= t_end; ++k) track(probe[k]);
      while (std::isfinite(next_record) && next_record <= t_end) {
        const State sr = unpack(stepper.dense(next_record), next_record);
        track(sr);
        push_sample(sr);
        next_record += options_.record_dt;
      }

      if (std::isfinite(hit_time)) {
        s = unpack(stepper.dense(hit_time), hit_time);
        if (!s.finite()) throw SimulationError("non-finite state", s);
        track(s);
        ++events_total;
        events_here = hit_time > last_event_tau ? 1 : events_here + 1;
        last_event_tau = hit_time;
        if (events_total > kMaxEvents || events_here > kMaxEventsAtOneInstant) {
          throw SimulationError("event cascade without progress", s);
        }
        if (hit == Guard::StrokeLow || hit == Guard::StrokeHigh) {
          out.stroke_violation = true;
          out.violation_time = hit_time;
          record_event(hit_time, EventKind::StrokeViolation, phase_, phase_);
          push_sample(s);
          term = Termination::StrokeViolation;
          done = true;
          break;
        }
        const Phase prev = phase_;
        // A static-cone guard names its exit phase. Reclassifying here could
        // land back in Static on the hysteresis edge with the guard already
        // nonnegative, and the crossing would never be seen again.
        Phase next = phase_transition(s, rest_force(s), phase_, params_.r_m);
        if (hit == Guard::Yield) next = Phase::Yielding;
        if (hit == Guard::Lift) next = Phase::Flight;
        if (hit == Guard::FootStop && options_.stop_at_foot_stop) {
          s.v_f = 0.0;
          rest_entry_ = hit_time;
          rest_state_ = s;
          record_event(hit_time, EventKind::FootStopped, prev, next);
          push_sample(s);
          term = Termination::FootStopped;
          done = true;
          break;
        }
        enter(next, s);
        if (settle_check(s)) {
          term = Termination::Settled;
          done = true;
        }
        break;  // restart the integrator at the event
      }

      s = unpack(stepper.y1(), t1);
      if (!s.finite()) throw SimulationError("non-finite state", s);
      if (t1 >= next_switch()) {
        ++switches_;
        record_event(t1, EventKind::Switch, phase_, phase_);
        enter(phase_transition(s, rest_force(s), phase_, params_.r_m), s);
        if (settle_check(s)) {
          term = Termination::Settled;
          done = true;
        }
        break;
      }
      if (settle_check(s)) {
        term = Termination::Settled;
        done = true;
        break;
      }
      if (t1 >= options_.tau_max) {
        term = Termination::Horizon;
        done = true;
        break;
      }
    }
  }

  push_sample(s);
  if (term == Termination::Settled) record_event(s.tau, EventKind::Settled, phase_, phase_);
  if (term == Termination::Horizon) record_event(s.tau, EventKind::Horizon, phase_, phase_);

  out.termination = term;
  out.settled = term == Termination::Settled;
  out.final_phase = phase_;
  out.final_state = s;
  out.depth = -min_x_f_;
  const bool resting = term == Termination::FootStopped ||
                       (phase_ == Phase::Static && term != Termination::StrokeViolation);
  out.rest_time = resting ? rest_entry_ : kNaN;
  out.rest_state = resting ? rest_state_ : s;
  out.e_act = -s.w_act;
  out.e_gnd = s.w_gnd;
  out.u_peak = u_peak_;
  out.min_gap = min_gap_;
  out.max_gap = max_gap_;
  out.steps = count_steps(traj_);
  return {out, std::move(traj_)};
}

}  // namespace

void SimOptions::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(name) + " must be finite and > 0");
    }
  };
  positive(rel_tol, "rel_tol");
  positive(abs_tol, "abs_tol");
  positive(event_tol, "event_tol");
  positive(tau_max, "tau_max");
  positive(settle_vel, "settle_vel");
  if (!(record_dt >= 0.0) || !std::isfinite(record_dt)) {
    throw std::invalid_argument("record_dt must be finite and >= 0");
  }
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::PhaseChange:
      return "phase_change";
    case EventKind::Switch:
      return "switch";
    case EventKind::StrokeViolation:
      return "stroke_violation";
    case EventKind::FootStopped:
      return "foot_stopped";
    case EventKind::Settled:
      return "settled";
    case EventKind::Horizon:
      return "horizon";
  }
  return "unknown";
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Settled:
      return "settled";
    case Termination::StrokeViolation:
      return "stroke_violation";
    case Termination::FootStopped:
      return "foot_stopped";
    case Termination::Horizon:
      return "horizon";
  }
  return "unknown";
}

bool SimOutcome::has_rest() const { return std::isfinite(rest_time); }

SimResult simulate(const Controller& controller, const Params& params, double v0,
                   const SimOptions& options) {
  params.validate();
  validate(controller);
  options.validate();
  if (!std::isfinite(v0) || v0 > 0.0) {
    throw std::invalid_argument("v0 must be finite and <= 0");
  }
  if (params.l0 < 0.0 || params.l0 > params.s) {
    throw std::invalid_argument("l0 must lie inside the stroke [0, s]");
  }
  Runner runner(controller, params, options);
  return runner.run(v0);
}

int count_steps(const Trajectory& trajectory) {
  const auto& smp = trajectory.samples;
  const double sliver = 10.0 * trajectory.event_tol;
  int steps = 0;
  bool open = false;          // inside a (possibly merged) Yielding episode
  bool moved = false;         // the open episode went down
  double episode_top = 0.0;   // x_f where the open episode started
  double gap_start = 0.0;     // time the open episode last left Yielding
  bool in_gap = false;
  for (std::size_t i = 0; i < smp.size(); ++i) {
    const bool yielding = smp[i].phase == Phase::Yielding;
    if (yielding) {
      if (open && in_gap && smp[i].tau - gap_start >= sliver) {
        if (moved) ++steps;
        open = false;
      }
      if (!open) {
        open = true;
        moved = false;
        episode_top = smp[i].state.x_f;
      }
      in_gap = false;
    } else if (open && !in_gap) {
      in_gap = true;
      gap_start = smp[i].tau;
    }
    if (open && smp[i].state.x_f < episode_top) moved = true;
  }
  if (open && moved) ++steps;
  return steps;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "tau,x_b,v_b,x_f,v_f,phase,u,gamma,w_act,w_gnd\n";
  for (const auto& smp : trajectory.samples) {
    const State& s = smp.state;
    csv::row(out, smp.tau, s.x_b, s.v_b, s.x_f, s.v_f, to_string(smp.phase), smp.u,
             smp.gamma, s.w_act, s.w_gnd);
  }
}

}  // namespace softland
