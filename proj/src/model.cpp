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

#include "softland/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace softland {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << name << " must be finite and > 0 (got " << value << ")";
    throw ModelError(msg.str());
  }
}

// Phase of a foot with |v_f| inside the velocity guard and x_f <= 0.
Phase rest_phase(double x_f, double u, double r_m) {
  const double needed = required_support(u, r_m);
  if (needed > -x_f + kYieldGuard) return Phase::Yielding;
  if (needed < -kYieldGuard) return Phase::Flight;
  return Phase::Static;
}

}  // namespace

Params Params::make(double r_m, double s, double u_max) {
  Params p;
  p.r_m = r_m;
  p.s = s;
  p.u_max = u_max;
  p.l0 = s / 2.0;
  p.validate();
  return p;
}

void Params::validate() const {
  require_positive(r_m, "r_m");
  require_positive(s, "s");
  if (!(u_max > 0.0)) throw ModelError("u_max must be > 0 or unbounded");
  if (!std::isfinite(l0)) throw ModelError("l0 must be finite");
}

void PhysicalParams::validate() const {
  require_positive(m_b, "m_b");
  require_positive(m_f, "m_f");
  require_positive(k_g, "k_g");
  require_positive(g, "g");
  require_positive(S, "S");
  if (!(U_max > 0.0)) throw ModelError("U_max must be > 0 or unbounded");
  if (!std::isfinite(V0) || V0 > 0.0) {
    throw ModelError("V0 must be finite and <= 0");
  }
}

Scales Scales::from(const PhysicalParams& p) {
  p.validate();
  const double m_t = p.total_mass();
  Scales sc;
  sc.u_s = m_t * p.g;
  sc.x_s = sc.u_s / p.k_g;
  sc.tau_s = std::sqrt(m_t / p.k_g);
  return sc;
}

bool State::finite() const {
  return std::isfinite(x_b) && std::isfinite(v_b) && std::isfinite(x_f) &&
         std::isfinite(v_f) && std::isfinite(w_act) && std::isfinite(w_gnd) &&
         std::isfinite(tau);
}

State State::impact(const Params& p, double v0) {
  State st;
  st.x_b = p.l0;
  st.v_b = v0;
  st.x_f = 0.0;
  st.v_f = v0;
  return st;
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Flight:
      return "flight";
    case Phase::Yielding:
      return "yielding";
    case Phase::Static:
      return "static";
  }
  return "unknown";
}

void validate(const Controller& controller) {
  std::visit(
      Overloaded{
          [](const Impedance& c) {
            if (!(c.k_p >= 0.0) || !std::isfinite(c.k_p)) {
              throw ModelError("k_p must be finite and >= 0");
            }
            if (!(c.k_d >= 0.0) || !std::isfinite(c.k_d)) {
              throw ModelError("k_d must be finite and >= 0");
            }
          },
          [](const BangBang& c) {
            require_positive(c.u_max, "bang-bang u_max");
            double prev = -1.0;
            for (double t : c.switch_times) {
              if (!std::isfinite(t) || t < 0.0) {
                throw ModelError("switch times must be finite and >= 0");
              }
              if (!(t > prev)) {
                throw ModelError("switch times must be strictly ascending");
              }
              prev = t;
            }
          },
          [](const ConstantForce& c) {
            if (!std::isfinite(c.u)) throw ModelError("constant force must be finite");
          },
          [](const Rigid&) {},
      },
      controller);
}

std::string_view controller_name(const Controller& controller) {
  return std::visit(Overloaded{
                        [](const Impedance&) { return std::string_view("impedance"); },
                        [](const BangBang&) { return std::string_view("bangbang"); },
                        [](const ConstantForce&) { return std::string_view("constant"); },
                        [](const Rigid&) { return std::string_view("rigid"); },
                    },
                    controller);
}

double grf(double x_f, double /*v_f*/, Phase phase, double required) {
  switch (phase) {
    case Phase::Flight:
      return 0.0;
    case Phase::Yielding:
      return std::max(0.0, -x_f);
    case Phase::Static:
      return std::clamp(required, 0.0, std::max(0.0, -x_f));
  }
  return 0.0;
}

std::optional<double> control_force(const Controller& controller,
                                    const State& state, const Params& params) {
  return std::visit(
      Overloaded{
          [&](const Impedance& c) -> std::optional<double> {
            double u = -c.k_p * (state.gap() - params.l0) -
                       c.k_d * (state.v_b - state.v_f);
            if (c.saturate && std::isfinite(params.u_max)) {
              u = std::clamp(u, -params.u_max, params.u_max);
            }
            return u;
          },
          [&](const BangBang& c) -> std::optional<double> {
            const auto elapsed = static_cast<std::size_t>(
                std::upper_bound(c.switch_times.begin(), c.switch_times.end(),
                                 state.tau) -
                c.switch_times.begin());
            return bang_bang_force(c.u_max, elapsed);
          },
          [](const ConstantForce& c) -> std::optional<double> { return c.u; },
          [](const Rigid&) -> std::optional<double> { return std::nullopt; },
      },
      controller);
}

Derivative dynamics(const State& state, double u, Phase phase, double r_m) {
  const double foot_scale = 1.0 + r_m;
  Derivative d;
  d.x_b = state.v_b;
  d.v_b = -1.0 + foot_scale / r_m * u;
  double gamma = 0.0;
  switch (phase) {
    case Phase::Flight:
      d.x_f = state.v_f;
      d.v_f = -1.0 - foot_scale * u;
      break;
    case Phase::Yielding:
      gamma = -state.x_f;
      d.x_f = state.v_f;
      d.v_f = -1.0 - foot_scale * (state.x_f + u);
      break;
    case Phase::Static:
      gamma = grf(state.x_f, 0.0, phase, required_support(u, r_m));
      d.x_f = 0.0;
      d.v_f = 0.0;
      break;
  }
  const double v_f = phase == Phase::Static ? 0.0 : state.v_f;
  d.w_act = u * (state.v_b - v_f);
  d.w_gnd = -gamma * v_f;
  return d;
}

Derivative rigid_dynamics(const State& state, Phase phase) {
  Derivative d;
  double accel = -1.0;
  double gamma = 0.0;
  switch (phase) {
    case Phase::Flight:
      break;
    case Phase::Yielding:
      gamma = -state.x_f;
      accel = -1.0 + gamma;
      break;
    case Phase::Static:
      return d;
  }
  d.x_b = state.v_b;
  d.v_b = accel;
  d.x_f = state.v_f;
  d.v_f = accel;
  d.w_gnd = -gamma * state.v_f;
  return d;
}

double rigid_internal_force(const State& state, Phase phase, double r_m) {
  const double body = r_m / (1.0 + r_m);
  switch (phase) {
    case Phase::Flight:
      return 0.0;
    case Phase::Yielding:
      return body * -state.x_f;
    case Phase::Static:
      return body;
  }
  return 0.0;
}

Phase classify(const State& state, double u, double r_m) {
  if (state.v_f > kVelocityGuard) return Phase::Flight;
  if (state.v_f < -kVelocityGuard) {
    return state.x_f <= 0.0 ? Phase::Yielding : Phase::Flight;
  }
  if (state.x_f > 0.0) return Phase::Flight;
  return rest_phase(state.x_f, u, r_m);
}

Phase phase_transition(const State& state, double u, Phase phase, double r_m) {
  switch (phase) {
    case Phase::Static:
      return rest_phase(state.x_f, u, r_m);
    case Phase::Yielding:
      if (state.v_f < -kVelocityGuard) return Phase::Yielding;
      return rest_phase(state.x_f, u, r_m);
    case Phase::Flight:
      return classify(state, u, r_m);
  }
  return phase;
}

double body_arrest_force(double x_b, double v_b, double x_f, double r_m) {
  const double gap = x_b - x_f;
  if (!(gap > 0.0)) {
    std::ostringstream msg;
    msg << "body_arrest_force: nonpositive body-foot gap " << gap;
    throw ModelError(msg.str());
  }
  return r_m / (1.0 + r_m) * (1.0 + v_b * v_b / (2.0 * gap));
}

double terminal_residual(const State& state_at_rest, double r_m) {
  const double u_b =
      body_arrest_force(state_at_rest.x_b, state_at_rest.v_b, state_at_rest.x_f, r_m);
  return state_at_rest.x_f + 1.0 / (1.0 + r_m) + u_b;
}

double rigid_depth(double v0) { return 1.0 + std::sqrt(1.0 + v0 * v0); }

Dimensionless to_dimensionless(const PhysicalParams& physical) {
  physical.validate();
  Dimensionless out;
  out.scales = Scales::from(physical);
  out.params.r_m = physical.m_b / physical.m_f;
  out.params.s = physical.S / out.scales.x_s;
  out.params.u_max = physical.U_max / out.scales.u_s;
  out.params.l0 = out.params.s / 2.0;
  out.v0 = physical.V0 * out.scales.tau_s / out.scales.x_s;
  return out;
}

PhysicalParams from_dimensionless(const Params& params, double v0,
                                  double total_mass, double k_g, double g) {
  params.validate();
  require_positive(total_mass, "total_mass");
  require_positive(k_g, "k_g");
  require_positive(g, "g");
  PhysicalParams p;
  p.m_b = total_mass * params.r_m / (1.0 + params.r_m);
  p.m_f = total_mass / (1.0 + params.r_m);
  p.k_g = k_g;
  p.g = g;
  const double u_s = total_mass * g;
  const double x_s = u_s / k_g;
  const double tau_s = std::sqrt(total_mass / k_g);
  p.S = params.s * x_s;
  p.U_max = params.u_max * u_s;
  p.V0 = v0 * x_s / tau_s;
  return p;
}

}  // namespace softland
