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

// Homogeneous finite-time feedback for the double integrator, its Lyapunov
// function, and the adaptive finite-time / fixed-time compensation laws for
// plants of the form x' = A x + B (phi(x)^T theta + u).

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "ofts/dynamics.hpp"
#include "ofts/homogeneity.hpp"
#include "ofts/types.hpp"

namespace ofts {

/// Result of sampling the finite-time Lyapunov function on the unit
/// homogeneous sphere.
struct LyapunovAudit {
  double min_value = 0.0;
  double max_derivative = 0.0;  // along the nominal closed loop
  std::size_t samples = 0;
  bool passed = false;
};

/// alpha in (0, 1) sets the homogeneity degree alpha - 1 of the closed loop;
/// l and s shape the Lyapunov function; gamma is the adaptation gain.
///
/// The checked constructor samples 256 points of the unit sphere for the
/// weights (2 - alpha, 1) and rejects (l, s) unless the Lyapunov function is
/// positive there and strictly decreasing along the nominal loop.
class FTControllerParams {
 public:
  FTControllerParams(double alpha, double l, double s, double gamma);

  /// Range checks only. Use when reproducing reference gains that fail the
  /// sphere audit; audit() still reports the problem.
  static FTControllerParams unvalidated(double alpha, double l, double s,
                                        double gamma);

  double alpha() const { return alpha_; }
  double l() const { return l_; }
  double s() const { return s_; }
  double gamma() const { return gamma_; }

  /// Weights (2 - alpha, 1).
  Dilation dilation() const;
  /// Degree of the closed loop, alpha - 1.
  double field_degree() const { return alpha_ - 1.0; }
  /// Degree of the Lyapunov function, 3 - alpha.
  double lyapunov_degree() const { return 3.0 - alpha_; }

  LyapunovAudit audit(std::size_t samples = 256) const;

 private:
  struct Unchecked {};
  FTControllerParams(Unchecked, double alpha, double l, double s, double gamma);

  double alpha_;
  double l_;
  double s_;
  double gamma_;
};

namespace detail {

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
}

template <typename Derived>
void check_planar(const Eigen::MatrixBase<Derived>& x) {
  if (x.size() != 2) {
    throw std::invalid_argument("double-integrator laws need a 2-vector");
  }
}

}  // namespace detail

/// x1 + sign_power(x2, 2 - alpha) / (2 - alpha).
template <typename Derived>
typename Derived::Scalar chi_alpha(const Eigen::MatrixBase<Derived>& x,
                                   double alpha) {
  using Scalar = typename Derived::Scalar;
  detail::check_alpha(alpha);
  detail::check_planar(x);
  const Scalar p = Scalar(2.0 - alpha);
  return x(0) + sign_power<Scalar>(x(1), p) / p;
}

/// -sign_power(x2, alpha) - sign_power(chi, alpha / (2 - alpha)).
template <typename Derived>
typename Derived::Scalar u_fts(const Eigen::MatrixBase<Derived>& x,
                               double alpha) {
  using Scalar = typename Derived::Scalar;
  const Scalar chi = chi_alpha(x, alpha);
  return -sign_power<Scalar>(x(1), Scalar(alpha)) -
         sign_power<Scalar>(chi, Scalar(alpha / (2.0 - alpha)));
}

/// Homogeneous Lyapunov function of degree 3 - alpha for the finite-time
/// double integrator:
///   (2-a)/(3-a) |chi|^((3-a)/(2-a)) + s x2 chi + l/(3-a) |x2|^(3-a).
template <typename Derived>
typename Derived::Scalar v_fts(const Eigen::MatrixBase<Derived>& x,
                               const FTControllerParams& p) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  using std::pow;
  const Scalar a = Scalar(p.alpha());
  const Scalar chi = chi_alpha(x, p.alpha());
  return (2.0 - a) / (3.0 - a) * pow(abs(chi), (3.0 - a) / (2.0 - a)) +
         Scalar(p.s()) * x(1) * chi +
         Scalar(p.l()) / (3.0 - a) * pow(abs(x(1)), 3.0 - a);
}

/// Analytic gradient of v_fts (row vector). Continuous, zero at the origin.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 1, 2> grad_v_fts(
    const Eigen::MatrixBase<Derived>& x, const FTControllerParams& p) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  using std::pow;
  const Scalar a = Scalar(p.alpha());
  const Scalar chi = chi_alpha(x, p.alpha());
  const Scalar chi_term = sign_power<Scalar>(chi, 1.0 / (2.0 - a));
  const Scalar x2_pow = pow(abs(x(1)), 1.0 - a);  // d chi / d x2
  Eigen::Matrix<Scalar, 1, 2> g;
  g(0) = chi_term + Scalar(p.s()) * x(1);
  g(1) = chi_term * x2_pow + Scalar(p.s()) * chi + Scalar(p.s()) * x(1) * x2_pow +
         Scalar(p.l()) * sign_power<Scalar>(x(1), 2.0 - a);
  return g;
}

/// Known bound |theta| <= theta_max and the adaptation gain.
class FxTAdaptiveParams {
 public:
  FxTAdaptiveParams(double theta_max, double gamma);

  double theta_max() const { return theta_max_; }
  double gamma() const { return gamma_; }

 private:
  double theta_max_;
  double gamma_;
};

/// gamma phi(x) (dV_FTS/dx B).
Vector adapt_ft(const Vector& x, const Vector& omega, const VectorField& phi,
                const Vector& b, const FTControllerParams& params);

/// u_FTS(x) - phi(x)^T omega.
double u_adaptive_ft(const Vector& x, const Vector& omega, const VectorField& phi,
                     const FTControllerParams& params);

/// u_FxTS(x) - theta_max phi(x)^T atan(omega), atan taken componentwise.
double u_adaptive_fxt(const Vector& x, const Vector& omega,
                      const ScalarField& u_fxts, const VectorField& phi,
                      const FxTAdaptiveParams& p);

/// Componentwise gamma / theta_max (1 + omega_i^2) phi_i(x) grad_v_b.
Vector adapt_fxt(const Vector& x, const Vector& omega, const VectorField& phi,
                 double grad_v_b, const FxTAdaptiveParams& p);

/// Effective estimate theta_max atan(omega).
Vector theta_hat_fxt(const Vector& omega, const FxTAdaptiveParams& p);

/// A nominal stabilizing law together with its Lyapunov function, evaluated
/// in one pass so implicit solves are shared.
struct NominalEvaluation {
  double u = 0.0;
  RowVector grad;
  double lyapunov = 0.0;
};
using NominalLaw = std::function<NominalEvaluation(const Vector&)>;

/// u_FTS with V_FTS and its gradient.
NominalLaw finite_time_law(const FTControllerParams& params);

/// Adaptive finite-time loop on [x; omega] for a planar plant.
SystemModel adaptive_ft_loop(const UncertainPlant& plant,
                             const FTControllerParams& params);

/// The uncertain plant under u_FTS alone.
SystemModel ft_feedback_loop(const UncertainPlant& plant,
                             const FTControllerParams& params);

/// Adaptive fixed-time loop on [x; omega] around a nominal fixed-time law.
SystemModel adaptive_fxt_loop(const UncertainPlant& plant, NominalLaw law,
                              const FxTAdaptiveParams& params);

/// V_FTS(x) + |theta - omega|^2 / (2 gamma). Needs the true theta, so it is
/// an analysis quantity only.
double adaptive_ft_lyapunov(const UncertainPlant& plant,
                            const FTControllerParams& params, const Vector& xt);

/// V_FxTS(x) + |theta - theta_max atan(omega)|^2 / (2 gamma).
double adaptive_fxt_lyapunov(const UncertainPlant& plant, const NominalLaw& law,
                             const FxTAdaptiveParams& params, const Vector& xt);

/// Upper bound on |omega| implied by a nonincreasing finite-time candidate:
/// |theta| + sqrt(2 gamma V0).
double omega_bound_ft(const UncertainPlant& plant, const FTControllerParams& params,
                      const Vector& xt0);

}  // namespace ofts
