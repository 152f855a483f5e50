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

#include <array>
#include <cmath>

#include <gtest/gtest.h>

#include "softland/integrator.hpp"

namespace softland {
namespace {

using Vec2 = std::array<double, 2>;

auto oscillator() {
  return [](double, const Vec2& y, Vec2& dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
}

TEST(DormandPrince, HarmonicOscillatorToTolerance) {
  StepControl ctl;
  DormandPrince<2> dp(ctl);
  auto f = oscillator();
  dp.reset(0.0, {1.0, 0.0}, f);
  while (dp.t1() < 10.0) dp.step(10.0, f);
  EXPECT_EQ(dp.t1(), 10.0);
  EXPECT_NEAR(dp.y1()[0], std::cos(10.0), 1e-8);
  EXPECT_NEAR(dp.y1()[1], -std::sin(10.0), 1e-8);
}

TEST(DormandPrince, DenseOutputMatchesSolutionInsideSteps) {
  StepControl ctl;
  ctl.h_max = 0.5;
  DormandPrince<2> dp(ctl);
  auto f = oscillator();
  dp.reset(0.0, {1.0, 0.0}, f);
  double worst = 0.0;
  while (dp.t1() < 6.0) {
    dp.step(6.0, f);
    EXPECT_EQ(dp.dense(dp.t0()), dp.y0());
    for (int k = 1; k < 8; ++k) {
      const double t = dp.t0() + (dp.t1() - dp.t0()) * k / 8.0;
      worst = std::max(worst, std::abs(dp.dense(t)[0] - std::cos(t)));
    }
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(DormandPrince, StopsExactlyAtLimit) {
  StepControl ctl;
  DormandPrince<2> dp(ctl);
  auto f = oscillator();
  dp.reset(0.0, {1.0, 0.0}, f);
  dp.step(1e-5, f);
  EXPECT_EQ(dp.t1(), 1e-5);
  EXPECT_THROW(dp.step(1e-5, f), IntegrationError);
}

TEST(DormandPrince, ExponentialDecayRelativeAccuracy) {
  StepControl ctl;
  DormandPrince<1> dp(ctl);
  auto f = [](double, const std::array<double, 1>& y, std::array<double, 1>& dy) {
    dy[0] = -3.0 * y[0];
  };
  dp.reset(0.0, {2.0}, f);
  while (dp.t1() < 2.0) dp.step(2.0, f);
  EXPECT_NEAR(dp.y1()[0] / (2.0 * std::exp(-6.0)), 1.0, 1e-7);
}

}  // namespace
}  // namespace softland
