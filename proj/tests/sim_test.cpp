// Copyright 2026 The ofts Authors
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


#include "ofts/sim.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ofts/errors.hpp"
#include "ofts/homogeneity.hpp"

namespace ofts {
namespace {

SystemModel linear_decay() {
  return SystemModel("decay", 1, 1, [](const Vector& x) -> Vector { return -x; },
                     [](const Vector& x) -> Vector { return x; });
}

SystemModel blow_up() {
  return SystemModel("blow-up", 1, 1, [](const Vector& x) -> Vector { return x.cwiseAbs2(); },
                     [](const Vector& x) -> Vector { return x; });
}

double decay_error(double dt) {
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.horizon = 1.0;
  return std::abs(integrate(linear_decay(), Vector::Ones(1), cfg).final_state()(0) -
                  std::exp(-1.0));
}

TEST(Method, Parse) {
  EXPECT_EQ(parse_method("rk4"), Method::kRk4);
  EXPECT_EQ(parse_method("euler"), Method::kEuler);
  EXPECT_EQ(to_string(Method::kEuler), "euler");
  EXPECT_THROW(parse_method("midpoint"), std::invalid_argument);
}

TEST(Config, Validation) {
  IntegratorConfig cfg;
  cfg.dt = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.horizon = cfg.dt / 2;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.record_every = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Integrate, ConstantField) {
  const SystemModel still("still", 1, 1, [](const Vector& x) -> Vector { return 0 * x; },
                          [](const Vector& x) -> Vector { return x; });
  IntegratorConfig cfg;
  cfg.dt = 0.1;
  cfg.horizon = 1.0;
  const Trajectory tr = integrate(still, Vector::Constant(1, 5.0), cfg);
  ASSERT_EQ(tr.size(), 11);
  for (Eigen::Index i = 0; i < tr.size(); ++i) EXPECT_EQ(tr.states(0, i), 5.0);
  EXPECT_DOUBLE_EQ(tr.times(tr.size() - 1), 1.0);
}

TEST(Integrate, ExponentialDecay) { EXPECT_LT(decay_error(1e-3), 1e-9); }

TEST(Integrate, FourthOrder) {
  const double ratio = decay_error(0.1) / decay_error(0.05);
  EXPECT_GE(ratio, 8.0);
  EXPECT_LE(ratio, 32.0);
}

TEST(Integrate, EulerFirstOrder) {
  IntegratorConfig cfg;
  cfg.method = Method::kEuler;
  cfg.horizon = 1.0;
  cfg.dt = 1e-2;
  const double e1 =
      std::abs(integrate(linear_decay(), Vector::Ones(1), cfg).final_state()(0) - std::exp(-1.0));
  cfg.dt = 5e-3;
  const double e2 =
      std::abs(integrate(linear_decay(), Vector::Ones(1), cfg).final_state()(0) - std::exp(-1.0));
  EXPECT_NEAR(e1 / e2, 2.0, 0.1);
}

TEST(Integrate, TruncatedLastStepHitsHorizon) {
  IntegratorConfig cfg;
  cfg.dt = 0.3;
  cfg.horizon = 1.0;
  const Trajectory tr = integrate(linear_decay(), Vector::Ones(1), cfg);
  ASSERT_EQ(tr.size(), 5);
  EXPECT_DOUBLE_EQ(tr.times(4), 1.0);
  EXPECT_NEAR(tr.times(3), 0.9, 1e-15);
}

TEST(Integrate, RecordEvery) {
  IntegratorConfig cfg;
  cfg.dt = 0.01;
  cfg.horizon = 1.0;
  cfg.record_every = 30;
  const Trajectory tr = integrate(linear_decay(), Vector::Ones(1), cfg);
  ASSERT_EQ(tr.size(), 5);
  EXPECT_NEAR(tr.times(3), 0.9, 1e-12);
  EXPECT_DOUBLE_EQ(tr.times(4), 1.0);
}

TEST(Integrate, SquareRootComparisonMatchesClosedForm) {
  IntegratorConfig cfg;
  cfg.dt = 1e-4;
  cfg.horizon = 3.0;
  const Trajectory tr = integrate(comparison_system(1.0, 0.5), Vector::Ones(1), cfg);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < tr.size(); ++i) {
    const double t = tr.times(i);
    const double exact = t < 2.0 ? (1.0 - t / 2.0) * (1.0 - t / 2.0) : 0.0;
    worst = std::max(worst, std::abs(tr.states(0, i) - exact));
  }
  EXPECT_LT(worst, 1e-4);
  // The origin is reached exactly and kept.
  for (Eigen::Index i = 0; i < tr.size(); ++i) {
    if (tr.times(i) >= 2.01) {
      EXPECT_EQ(tr.states(0, i), 0.0);
    }
  }
}

TEST(Integrate, ClampOnlyTouchesAbsorbingComponents) {
  SystemModel sys("partial", 2, 1, [](const Vector& x) -> Vector {
    return Eigen::Vector2d(-sign_power(x(0), 0.5), 0.0);
  }, [](const Vector& x) -> Vector { return x.head(1); });
  sys.set_absorbing_dims(1);
  IntegratorConfig cfg;
  cfg.dt = 1e-4;
  cfg.horizon = 3.0;
  const Trajectory tr = integrate(sys, Eigen::Vector2d(1.0, 1e-12), cfg);
  EXPECT_EQ(tr.final_state()(0), 0.0);
  EXPECT_EQ(tr.final_state()(1), 1e-12);
}

TEST(Integrate, Deterministic) {
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.horizon = 4.0;
  const SystemModel s = example1_system();
  const Trajectory a = integrate(s, Eigen::Vector2d(1.0, 1.0), cfg);
  const Trajectory b = integrate(s, Eigen::Vector2d(1.0, 1.0), cfg);
  EXPECT_EQ(a.states, b.states);
  EXPECT_EQ(a.times, b.times);
}

TEST(Integrate, DivergenceCarriesTime) {
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.horizon = 2.0;
  try {
    integrate(blow_up(), Vector::Ones(1), cfg);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_GT(e.time(), 0.9);
    EXPECT_LT(e.time(), 1.1);
  }
}

TEST(Integrate, InputErrors) {
  IntegratorConfig cfg;
  EXPECT_THROW(integrate(linear_decay(), Vector::Ones(2), cfg), std::invalid_argument);
  EXPECT_THROW(integrate(linear_decay(), Vector::Constant(1, NAN), cfg), std::invalid_argument);
}

Trajectory ramp(double dt, double horizon) {
  Trajectory tr;
  const auto n = static_cast<Eigen::Index>(std::llround(horizon / dt)) + 1;
  tr.times.resize(n);
  tr.states.resize(1, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    tr.times(i) = static_cast<double>(i) * dt;
    tr.states(0, i) = std::max(0.0, 1.0 - tr.times(i));
  }
  tr.outputs = tr.states;
  tr.state_labels = {"x1"};
  return tr;
}

TEST(Settling, ZeroOutput) {
  Trajectory tr = ramp(1e-3, 3.0);
  tr.outputs.setZero();
  const SettlingEstimate s = detect_settling(tr, 1e-3, 1.0);
  ASSERT_TRUE(s.t_settle);
  EXPECT_EQ(*s.t_settle, 0.0);
  EXPECT_TRUE(s.settled);
}

TEST(Settling, Ramp) {
  const SettlingEstimate s = detect_settling(ramp(1e-3, 3.0), 1e-3, 1.0);
  ASSERT_TRUE(s.t_settle);
  EXPECT_GE(*s.t_settle, 0.999);
  EXPECT_LE(*s.t_settle, 1.001);
  EXPECT_TRUE(s.settled);
}

TEST(Settling, DwellNotMet) {
  const SettlingEstimate s = detect_settling(ramp(1e-3, 1.5), 1e-3, 1.0);
  ASSERT_TRUE(s.t_settle);
  EXPECT_FALSE(s.settled);
}

TEST(Settling, NeverSettles) {
  Trajectory tr = ramp(1e-3, 3.0);
  tr.outputs.setOnes();
  const SettlingEstimate s = detect_settling(tr, 1e-3, 1.0);
  EXPECT_FALSE(s.t_settle);
  EXPECT_FALSE(s.settled);
  EXPECT_THROW(detect_settling(tr, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(detect_settling(tr, 1e-3, 3.0), std::invalid_argument);
}

TEST(Batch, ZeroInitialStates) {
  IntegratorConfig cfg;
  cfg.dt = 1e-2;
  cfg.horizon = 2.0;
  const std::vector<Vector> zeros(5, Vector::Zero(2));
  const auto out = batch_settling(example1_system, zeros, cfg, 1e-3, 0.5);
  ASSERT_EQ(out.size(), 5u);
  for (const auto& s : out) {
    ASSERT_TRUE(s.t_settle);
    EXPECT_EQ(*s.t_settle, 0.0);
  }
}

TEST(Batch, OrderStableAndErrorsCaptured) {
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.horizon = 2.0;
  const std::vector<Vector> x0{Vector::Zero(1), Vector::Ones(1), Vector::Constant(1, -0.5)};
  const auto out = batch_settling(blow_up, x0, cfg, 1e-3, 0.5);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_TRUE(out[0].settled);
  EXPECT_FALSE(out[1].settled);
  ASSERT_TRUE(out[1].error);
  ASSERT_TRUE(out[1].divergence_time);
  EXPECT_NEAR(*out[1].divergence_time, 1.0, 0.1);
  EXPECT_FALSE(out[2].error);
  // x' = x^2 from -0.5 decays like 1 / t and has not settled by t = 2.
  EXPECT_FALSE(out[2].settled);

  const auto serial = batch_settling(linear_decay, std::vector<Vector>{Vector::Ones(1)}, cfg, 0.2, 0.5);
  const auto again = batch_settling(linear_decay, std::vector<Vector>{Vector::Ones(1)}, cfg, 0.2, 0.5);
  EXPECT_EQ(*serial[0].t_settle, *again[0].t_settle);
}

TEST(Csv, HeaderAndPrecision) {
  IntegratorConfig cfg;
  cfg.dt = 0.5;
  cfg.horizon = 1.0;
  SystemModel sys = linear_decay();
  sys.set_control([](const Vector& x) { return -x(0); });
  std::ostringstream out;
  write_csv(out, integrate(sys, Vector::Constant(1, 1.0 / 3.0), cfg));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x1,y1,u");
  std::getline(in, line);
  EXPECT_EQ(line, "0,0.33333333333333331,0.33333333333333331,-0.33333333333333331");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

}  // namespace
}  // namespace ofts
