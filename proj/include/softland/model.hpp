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

// Dimensionless two-mass robot impacting a unidirectional ground spring.
//
// All quantities are scaled by the unit length x_s = m_t g / k_g, the unit
// time tau_s = sqrt(m_t / k_g) and the unit force u_s = m_t g. Positions are
// measured from the undisturbed ground surface, positive up, so the foot
// position x_f is negative while intruding and the penetration depth is -x_f.

#pragma once

#include <array>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace softland {

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Velocity guard used for |v_f| == 0 tests.
inline constexpr double kVelocityGuard = 1e-9;
/// Hysteresis on the static friction cone, prevents Static/Yielding chatter.
inline constexpr double kYieldGuard = 1e-9;

struct Params {
  double r_m = 5.0;          // body mass / foot mass
  double s = 20.0;           // stroke limit
  double u_max = kUnbounded; // actuator force bound
  double l0 = 10.0;          // virtual spring rest length

  /// Builds a validated parameter set with the rest length at mid-stroke.
  static Params make(double r_m, double s, double u_max = kUnbounded);

  void validate() const;

  /// Body share of the total mass, r_m / (1 + r_m).
  double body_fraction() const { return r_m / (1.0 + r_m); }
  /// Foot share of the total mass, 1 / (1 + r_m).
  double foot_fraction() const { return 1.0 / (1.0 + r_m); }
};

struct PhysicalParams {
  double m_b = 2.5;      // kg
  double m_f = 0.5;      // kg
  double k_g = 4400.0;   // N/m
  double g = 9.81;       // m/s^2
  double S = 0.1338;     // m
  double U_max = kUnbounded;  // N
  double V0 = -1.2;      // m/s, negative downward

  void validate() const;
  double total_mass() const { return m_b + m_f; }
};

struct Scales {
  double x_s = 0.0;    // m
  double tau_s = 0.0;  // s
  double u_s = 0.0;    // N

  static Scales from(const PhysicalParams& p);
};

struct State {
  double x_b = 0.0;
  double v_b = 0.0;
  double x_f = 0.0;
  double v_f = 0.0;
  double w_act = 0.0;  // integral of u (v_b - v_f)
  double w_gnd = 0.0;  // integral of -gamma v_f
  double tau = 0.0;

  double gap() const { return x_b - x_f; }
  double depth() const { return -x_f; }
  bool finite() const;

  /// Impact state: body at the rest length above a foot touching the surface.
  static State impact(const Params& p, double v0);
};

enum class Phase { Flight, Yielding, Static };

std::string_view to_string(Phase phase);

struct Impedance {
  double k_p = 0.0;
  double k_d = 0.0;
  bool saturate = false;
};

/// Open-loop force alternating between +u_max and -u_max, starting positive.
struct BangBang {
  double u_max = 0.0;
  std::vector<double> switch_times;
};

struct ConstantForce {
  double u = 0.0;
};

/// Body and foot locked together at their impact separation.
struct Rigid {};

using Controller = std::variant<Impedance, BangBang, ConstantForce, Rigid>;

void validate(const Controller& controller);
std::string_view controller_name(const Controller& controller);

/// Ground reaction force for the given phase. `required` is the force that
/// holds the foot still and only matters in the Static phase.
double grf(double x_f, double v_f, Phase phase, double required);

/// Actuator force, positive pushing body and foot apart. Impedance output is
/// clamped to +-u_max only when its saturate flag is set. Rigid returns
/// nullopt since the locked dynamics carry no explicit actuator force.
std::optional<double> control_force(const Controller& controller,
                                    const State& state, const Params& params);

/// Force of a bang-bang profile after `switches_elapsed` switches.
inline double bang_bang_force(double u_max, std::size_t switches_elapsed) {
  return switches_elapsed % 2 == 0 ? u_max : -u_max;
}

/// Ground force needed to keep the foot static under actuator force u.
inline double required_support(double u, double r_m) {
  return u + 1.0 / (1.0 + r_m);
}

struct Derivative {
  double x_b = 0.0;
  double v_b = 0.0;
  double x_f = 0.0;
  double v_f = 0.0;
  double w_act = 0.0;
  double w_gnd = 0.0;
};

/// Stance/flight equations of motion with the work integrals appended.
Derivative dynamics(const State& state, double u, Phase phase, double r_m);

/// Lumped single-mass equations for the Rigid controller.
Derivative rigid_dynamics(const State& state, Phase phase);

/// Internal actuator force implied by the Rigid lock (for reporting).
double rigid_internal_force(const State& state, Phase phase, double r_m);

/// Phase that the hybrid system should occupy given the current state and
/// actuator force.
Phase classify(const State& state, double u, double r_m);

/// Phase reached from `phase` at an event point located by the integrator.
Phase phase_transition(const State& state, double u, Phase phase, double r_m);

/// Constant force that stops the body within the remaining stroke.
double body_arrest_force(double x_b, double v_b, double x_f, double r_m);

/// x_f + 1/(1+r_m) + u_b, nonpositive when the ground at the current depth
/// can carry the body-arresting force.
double terminal_residual(const State& state_at_rest, double r_m);

/// Maximum penetration depth of a rigid impactor, 1 + sqrt(1 + v0^2).
double rigid_depth(double v0);

struct Dimensionless {
  Params params;
  double v0 = 0.0;
  Scales scales;
};

Dimensionless to_dimensionless(const PhysicalParams& physical);
PhysicalParams from_dimensionless(const Params& params, double v0,
                                  double total_mass, double k_g,
                                  double g = 9.81);

}  // namespace softland
