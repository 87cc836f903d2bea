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

#include "ofts/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "ofts/homogeneity.hpp"
#include "ofts/linalg.hpp"

namespace ofts {
namespace {

void require_dim(const Vector& x, Eigen::Index n, const char* what) {
  if (x.size() != n) {
    throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                std::to_string(n) + ", got " +
                                std::to_string(x.size()));
  }
}

std::vector<std::string> default_labels(Eigen::Index n, const char* prefix) {
  std::vector<std::string> labels;
  for (Eigen::Index i = 0; i < n; ++i) {
    labels.push_back(prefix + std::to_string(i + 1));
  }
  return labels;
}

Matrix double_integrator() {
  Matrix a(2, 2);
  a << 0.0, 1.0, 0.0, 0.0;
  return a;
}

Vector unit_input() {
  Vector b(2);
  b << 0.0, 1.0;
  return b;
}

Vector output_first(const Vector& x) { return x.head(1); }

}  // namespace

SystemModel::SystemModel(std::string name, Eigen::Index state_dim,
                         Eigen::Index output_dim, VectorField f, VectorField h)
    : name_(std::move(name)),
      state_dim_(state_dim),
      output_dim_(output_dim),
      f_(std::move(f)),
      h_(std::move(h)),
      absorbing_dims_(state_dim),
      labels_(default_labels(state_dim, "x")) {
  if (state_dim <= 0 || output_dim <= 0) {
    throw std::invalid_argument("SystemModel: dimensions must be positive");
  }
  if (!f_ || !h_) {
    throw std::invalid_argument("SystemModel: f and h are required");
  }
}

Vector SystemModel::rhs(const Vector& x) const {
  require_dim(x, state_dim_, "SystemModel::rhs");
  return f_(x);
}

Vector SystemModel::output(const Vector& x) const {
  require_dim(x, state_dim_, "SystemModel::output");
  return h_(x);
}

double SystemModel::control(const Vector& x) const {
  if (!control_) throw std::logic_error("SystemModel: no control attached");
  return control_(x);
}

void SystemModel::set_absorbing_dims(Eigen::Index k) {
  if (k < 0 || k > state_dim_) {
    throw std::invalid_argument("SystemModel: absorbing_dims out of range");
  }
  absorbing_dims_ = k;
}

void SystemModel::set_state_labels(std::vector<std::string> labels) {
  if (static_cast<Eigen::Index>(labels.size()) != state_dim_) {
    throw std::invalid_argument("SystemModel: one label per state component");
  }
  labels_ = std::move(labels);
}

bool SystemModel::origin_is_equilibrium(double tol) const {
  const Vector zero = Vector::Zero(state_dim_);
  return f_(zero).cwiseAbs().maxCoeff() <= tol &&
         h_(zero).cwiseAbs().maxCoeff() <= tol;
}

UncertainPlant::UncertainPlant(std::string name, Matrix a, Vector b,
                               VectorField phi, Vector theta)
    : name_(std::move(name)),
      a_(std::move(a)),
      b_(std::move(b)),
      phi_(std::move(phi)),
      theta_(std::move(theta)) {
  if (a_.rows() != a_.cols() || b_.size() != a_.rows()) {
    throw std::invalid_argument("UncertainPlant: A must be n x n and B n x 1");
  }
  if (!phi_) throw std::invalid_argument("UncertainPlant: regressor required");
  if (theta_.size() == 0) {
    throw std::invalid_argument("UncertainPlant: empty parameter vector");
  }
  if (!is_controllable(a_, b_)) {
    throw std::invalid_argument("UncertainPlant: (A, B) is not controllable");
  }
  const Vector probe = phi_(Vector::Zero(a_.rows()));
  if (probe.size() != theta_.size()) {
    throw std::invalid_argument("UncertainPlant: regressor and theta sizes differ");
  }
}

Vector UncertainPlant::regressor(const Vector& x) const {
  require_dim(x, state_dim(), "UncertainPlant::regressor");
  return phi_(x);
}

UncertainPlant UncertainPlant::with_theta(Vector theta) const {
  return UncertainPlant(name_, a_, b_, phi_, std::move(theta));
}

Vector plant_rhs(const UncertainPlant& p, const Vector& x, double u) {
  require_dim(x, p.state_dim(), "plant_rhs");
  return p.A() * x + p.B() * (p.regressor(x).dot(p.theta()) + u);
}

Vector ExtendedState::stacked() const {
  Vector out(x.size() + omega.size());
  out << x, omega;
  return out;
}

ExtendedState ExtendedState::split(const Vector& stacked, Eigen::Index state_dim) {
  if (state_dim < 0 || state_dim > stacked.size()) {
    throw std::invalid_argument("ExtendedState::split: bad state dimension");
  }
  return {stacked.head(state_dim), stacked.tail(stacked.size() - state_dim)};
}

SystemModel assemble_adaptive_loop(const UncertainPlant& p, ControlLaw control,
                                   AdaptationLaw adaptation) {
  const Eigen::Index n = p.state_dim();
  const Eigen::Index q = p.param_dim();
  auto f = [p, control, adaptation, n, q](const Vector& xt) {
    const Vector x = xt.head(n);
    const Vector omega = xt.tail(q);
    Vector out(n + q);
    out.head(n) = plant_rhs(p, x, control(x, omega));
    out.tail(q) = adaptation(x, omega);
    return out;
  };
  auto h = [n](const Vector& xt) -> Vector { return xt.head(n); };
  SystemModel model(p.name() + "/adaptive", n + q, n, f, h);
  model.set_control([control, n, q](const Vector& xt) {
    return control(xt.head(n), xt.tail(q));
  });
  model.set_absorbing_dims(n);
  auto labels = default_labels(n, "x");
  for (const auto& w : default_labels(q, "omega")) labels.push_back(w);
  model.set_state_labels(std::move(labels));
  return model;
}

SystemModel assemble_feedback_loop(const UncertainPlant& p, ScalarField u) {
  auto f = [p, u](const Vector& x) { return plant_rhs(p, x, u(x)); };
  auto h = [](const Vector& x) -> Vector { return x; };
  SystemModel model(p.name() + "/feedback", p.state_dim(), p.state_dim(), f, h);
  model.set_control(u);
  return model;
}

SystemModel assemble_nominal_loop(const Matrix& a, const Vector& b, ScalarField u,
                                  std::string name) {
  if (a.rows() != a.cols() || b.size() != a.rows()) {
    throw std::invalid_argument("assemble_nominal_loop: dimension mismatch");
  }
  auto f = [a, b, u](const Vector& x) -> Vector { return a * x + b * u(x); };
  auto h = [](const Vector& x) -> Vector { return x; };
  SystemModel model(std::move(name), a.rows(), a.rows(), f, h);
  model.set_control(u);
  return model;
}

SystemModel example1_system() {
  auto f = [](const Vector& x) {
    Vector dx(2);
    const double a1 = std::abs(x(0));
    dx(0) = -sign_power(x(0), 0.5) + x(1) * x(1) * x(0);
    dx(1) = -a1 * std::sqrt(a1) * x(1);
    return dx;
  };
  SystemModel model("example1", 2, 1, f, output_first);
  // {x1 = 0} is invariant: f1(0, x2) = 0 and f2(0, x2) = 0.
  model.set_absorbing_dims(1);
  return model;
}

SystemModel example2_system() {
  auto f = [](const Vector& x) {
    Vector dx(2);
    const double a1 = std::abs(x(0));
    const double s1 = std::sin(x(0));
    dx(0) = -sign_power(x(0), 0.5) + 2.0 * x(0) * std::sin(x(1)) -
            sign(x(0)) * x(0) * x(0);
    dx(1) = a1 * std::sqrt(a1) + std::sin(x(1)) * s1 * s1;
    return dx;
  };
  SystemModel model("example2", 2, 1, f, output_first);
  model.set_absorbing_dims(1);
  return model;
}

UncertainPlant example3_plant(std::optional<Vector> theta) {
  auto phi = [](const Vector& x) {
    Vector r(2);
    r << std::sin(x(0) * x(1)), x(1) * x(1);
    return r;
  };
  return UncertainPlant("example3-plant", double_integrator(), unit_input(), phi,
                        theta.value_or(Eigen::Vector2d(3.0, -2.0)));
}

UncertainPlant example4_plant(std::optional<Vector> theta) {
  auto phi = [](const Vector& x) {
    Vector r(2);
    r << std::sin(x(0) * x(1)), x(1);
    return r;
  };
  return UncertainPlant("example4-plant", double_integrator(), unit_input(), phi,
                        theta.value_or(Eigen::Vector2d(3.0, 2.0)));
}

SystemModel comparison_system(double c, double mu, std::string name) {
  if (!(c > 0.0) || !(mu > 0.0)) {
    throw std::invalid_argument("comparison_system: c and mu must be positive");
  }
  auto f = [c, mu](const Vector& v) -> Vector {
    return Vector::Constant(1, -c * sign_power(v(0), mu));
  };
  auto h = [](const Vector& v) -> Vector { return v; };
  SystemModel model(std::move(name), 1, 1, f, h);
  model.set_state_labels({"V"});
  return model;
}

SystemModel comparison_system(double k1, double mu, double k2, double nu,
                              std::string name) {
  if (!(k1 > 0.0) || !(k2 > 0.0) || !(mu > 0.0) || !(nu > 0.0)) {
    throw std::invalid_argument("comparison_system: rates and exponents must be positive");
  }
  auto f = [k1, mu, k2, nu](const Vector& v) -> Vector {
    return Vector::Constant(1, -k1 * sign_power(v(0), mu) - k2 * sign_power(v(0), nu));
  };
  auto h = [](const Vector& v) -> Vector { return v; };
  SystemModel model(std::move(name), 1, 1, f, h);
  model.set_state_labels({"V"});
  return model;
}

SystemModel builtin_system(const std::string& name) {
  if (name == "example1") return example1_system();
  if (name == "example2") return example2_system();
  throw std::invalid_argument("unknown system '" + name + "'");
}

UncertainPlant builtin_plant(const std::string& name, std::optional<Vector> theta) {
  if (name == "example3-plant") return example3_plant(std::move(theta));
  if (name == "example4-plant") return example4_plant(std::move(theta));
  throw std::invalid_argument("unknown plant '" + name + "'");
}

}  // namespace ofts
