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

// Dormand-Prince 5(4) with the 4th-order continuous extension of Hairer,
// Norsett & Wanner. One accepted step at a time so the caller can inspect
// the dense output for guard crossings before committing to the next step.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace softland {

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepControl {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double h_init = 1e-3;
  double h_max = 0.25;
  double h_min = 1e-14;
};

template <std::size_t N>
class DormandPrince {
 public:
  using Vec = std::array<double, N>;

  explicit DormandPrince(StepControl control) : ctl_(control), h_(control.h_init) {}

  /// Restart at (t, y); discards FSAL data and the previous step.
  template <class F>
  void reset(double t, const Vec& y, F&& f) {
    t0_ = t1_ = t;
    y0_ = y1_ = y;
    f(t, y, k1_);
    h_ = std::min(h_, ctl_.h_max);
  }

  /// Takes one accepted step without passing t_limit. Throws on step-size
  /// collapse or a non-finite state.
  template <class F>
  void step(double t_limit, F&& f) {
    t0_ = t1_;
    y0_ = y1_;
    if (!(t_limit > t0_)) throw IntegrationError("step: t_limit not ahead of t");
    for (;;) {
      double h = std::min(h_, ctl_.h_max);
      bool clipped = false;
      if (t0_ + h >= t_limit) {
        h = t_limit - t0_;
        clipped = true;
      }
      const double err = attempt(h, f);
      if (err <= 1.0 && std::isfinite(err)) {
        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        // A clipped step says nothing about the natural step size.
        if (!clipped || fac < 1.0) h_ = h * fac;
        t1_ = clipped ? t_limit : t0_ + h;
        y1_ = ytmp_;
        build_dense(h);
        k1_ = k7_;
        return;
      }
      const double fac = std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9) : 0.1;
      h_ = h * fac;
      if (h_ < ctl_.h_min) {
        throw IntegrationError("step size collapsed at t=" + std::to_string(t0_));
      }
    }
  }

  double t0() const { return t0_; }
  double t1() const { return t1_; }
  const Vec& y0() const { return y0_; }
  const Vec& y1() const { return y1_; }

  /// State at t in [t0, t1] from the continuous extension.
  Vec dense(double t) const {
    const double h = t1_ - t0_;
    if (h == 0.0) return y1_;
    const double th = (t - t0_) / h;
    const double th1 = 1.0 - th;
    Vec out;
    for (std::size_t i = 0; i < N; ++i) {
      out[i] = r1_[i] + th * (r2_[i] + th1 * (r3_[i] + th * (r4_[i] + th1 * r5_[i])));
    }
    return out;
  }

 private:
  template <class F>
  double attempt(double h, F&& f) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    Vec y;
    for (std::size_t i = 0; i < N; ++i) y[i] = y0_[i] + h * a21 * k1_[i];
    f(t0_ + c2 * h, y, k2_);
    for (std::size_t i = 0; i < N; ++i) y[i] = y0_[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
    f(t0_ + c3 * h, y, k3_);
    for (std::size_t i = 0; i < N; ++i) {
      y[i] = y0_[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
    }
    f(t0_ + c4 * h, y, k4_);
    for (std::size_t i = 0; i < N; ++i) {
      y[i] = y0_[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
    }
    f(t0_ + c5 * h, y, k5_);
    for (std::size_t i = 0; i < N; ++i) {
      y[i] = y0_[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                           a65 * k5_[i]);
    }
    f(t0_ + h, y, k6_);
    for (std::size_t i = 0; i < N; ++i) {
      ytmp_[i] = y0_[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] +
                               a76 * k6_[i]);
    }
    f(t0_ + h, ytmp_, k7_);

    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                            e6 * k6_[i] + e7 * k7_[i]);
      const double sc = ctl_.abs_tol + ctl_.rel_tol * std::max(std::abs(y0_[i]), std::abs(ytmp_[i]));
      sum += (e / sc) * (e / sc);
    }
    return std::sqrt(sum / static_cast<double>(N));
  }

  void build_dense(double h) {
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0,
                            d7 = 69997945.0 / 29380423.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double dy = y1_[i] - y0_[i];
      const double bspl = h * k1_[i] - dy;
      r1_[i] = y0_[i];
      r2_[i] = dy;
      r3_[i] = bspl;
      r4_[i] = dy - h * k7_[i] - bspl;
      r5_[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] +
                    d6 * k6_[i] + d7 * k7_[i]);
    }
  }

  StepControl ctl_;
  double h_;
  double t0_ = 0.0, t1_ = 0.0;
  Vec y0_{}, y1_{}, ytmp_{};
  Vec k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{};
  Vec r1_{}, r2_{}, r3_{}, r4_{}, r5_{};
};

}  // namespace softland
