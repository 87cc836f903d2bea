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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ofts/types.hpp"

namespace ofts {

/// An autonomous system x' = f(x), y = h(x).
///
/// Models are immutable once built and cheap to copy; every callable must be
/// pure so that a model can be evaluated from several threads.
class SystemModel {
 public:
  SystemModel(std::string name, Eigen::Index state_dim, Eigen::Index output_dim,
              VectorField f, VectorField h);

  const std::string& name() const { return name_; }
  Eigen::Index state_dim() const { return state_dim_; }
  Eigen::Index output_dim() const { return output_dim_; }

  Vector rhs(const Vector& x) const;
  Vector output(const Vector& x) const;

  /// Optional scalar control recorded alongside trajectories.
  bool has_control() const { return static_cast<bool>(control_); }
  double control(const Vector& x) const;
  void set_control(ScalarField u) { control_ = std::move(u); }

  /// Number of leading state components whose zero set is absorbing. The
  /// integrator zeroes exactly these once their norm is small enough.
  Eigen::Index absorbing_dims() const { return absorbing_dims_; }
  void set_absorbing_dims(Eigen::Index k);

  /// Column labels; defaults to x1..xn.
  const std::vector<std::string>& state_labels() const { return labels_; }
  void set_state_labels(std::vector<std::string> labels);

  /// f(0) = 0 and h(0) = 0 to within `tol`.
  bool origin_is_equilibrium(double tol = 0.0) const;

 private:
  std::string name_;
  Eigen::Index state_dim_;
  Eigen::Index output_dim_;
  VectorField f_;
  VectorField h_;
  ScalarField control_;
  Eigen::Index absorbing_dims_;
  std::vector<std::string> labels_;
};

/// x' = A x + B (phi(x)^T theta + u) with a scalar input.
///
/// theta is simulation ground truth. Controllers and adaptation laws never
/// receive it; they see only the state, the estimate and the regressor.
class UncertainPlant {
 public:
  /// Throws std::invalid_argument on inconsistent sizes or when (A, B) is not
  /// controllable.
  UncertainPlant(std::string name, Matrix a, Vector b, VectorField phi,
                 Vector theta);

  const std::string& name() const { return name_; }
  const Matrix& A() const { return a_; }
  const Vector& B() const { return b_; }
  const Vector& theta() const { return theta_; }
  Eigen::Index state_dim() const { return a_.rows(); }
  Eigen::Index param_dim() const { return theta_.size(); }

  Vector regressor(const Vector& x) const;

  /// Same plant with a different true parameter vector.
  UncertainPlant with_theta(Vector theta) const;

 private:
  std::string name_;
  Matrix a_;
  Vector b_;
  VectorField phi_;
  Vector theta_;
};

/// A x + B (phi(x)^T theta + u).
Vector plant_rhs(const UncertainPlant& p, const Vector& x, double u);

/// Plant state stacked with the adaptive parameter estimate.
struct ExtendedState {
  Vector x;
  Vector omega;

  Vector stacked() const;
  static ExtendedState split(const Vector& stacked, Eigen::Index state_dim);
};

using ControlLaw = std::function<double(const Vector& x, const Vector& omega)>;
using AdaptationLaw = std::function<Vector(const Vector& x, const Vector& omega)>;

/// Closed loop on [x; omega] with x' = plant_rhs(x, control(x, omega)),
/// omega' = adaptation(x, omega) and output y = x.
SystemModel assemble_adaptive_loop(const UncertainPlant& p, ControlLaw control,
                                   AdaptationLaw adaptation);

/// x' = plant_rhs(x, u(x)); the uncertainty is present but not compensated.
SystemModel assemble_feedback_loop(const UncertainPlant& p, ScalarField u);

/// x' = A x + B u(x) without any uncertainty, y = x.
SystemModel assemble_nominal_loop(const Matrix& a, const Vector& b,
                                  ScalarField u, std::string name = "nominal");

/// x1' = -|x1|^0.5 sign(x1) + x2^2 x1, x2' = -|x1|^1.5 x2, y = x1.
SystemModel example1_system();

/// x1' = -|x1|^0.5 sign(x1) + 2 x1 sin(x2) - sign(x1) x1^2,
/// x2' = |x1|^1.5 + sin(x2) sin(x1)^2, y = x1.
SystemModel example2_system();

/// Double integrator with phi(x) = (sin(x1 x2), x2^2), default theta (3, -2).
UncertainPlant example3_plant(std::optional<Vector> theta = std::nullopt);

/// Double integrator with phi(x) = (sin(x1 x2), x2), default theta (3, 2).
UncertainPlant example4_plant(std::optional<Vector> theta = std::nullopt);

/// Scalar comparison system V' = -c |V|^mu sign(V).
SystemModel comparison_system(double c, double mu, std::string name = "comparison");

/// Scalar comparison system V' = -k1 |V|^mu sign(V) - k2 |V|^nu sign(V).
SystemModel comparison_system(double k1, double mu, double k2, double nu,
                              std::string name = "comparison-fixed-time");

/// "example1" or "example2"; throws std::invalid_argument otherwise.
SystemModel builtin_system(const std::string& name);

/// "example3-plant" or "example4-plant"; throws std::invalid_argument otherwise.
UncertainPlant builtin_plant(const std::string& name,
                             std::optional<Vector> theta = std::nullopt);

}  // namespace ofts
