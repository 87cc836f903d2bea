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

#include "ofts/controllers.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <utility>

namespace ofts {
namespace {

void check_positive(double v, const char* what) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

void check_planar_plant(const UncertainPlant& plant) {
  if (plant.state_dim() != 2) {
    throw std::invalid_argument("finite-time double-integrator laws need a planar plant");
  }
}

}  // namespace

FTControllerParams::FTControllerParams(Unchecked, double alpha, double l,
                                       double s, double gamma)
    : alpha_(alpha), l_(l), s_(s), gamma_(gamma) {
  detail::check_alpha(alpha);
  check_positive(l, "l");
  check_positive(s, "s");
  check_positive(gamma, "gamma");
}

FTControllerParams::FTControllerParams(double alpha, double l, double s,
                                       double gamma)
    : FTControllerParams(Unchecked{}, alpha, l, s, gamma) {
  const LyapunovAudit a = audit();
  if (!a.passed) {
    std::ostringstream msg;
    msg << "FTControllerParams: (l, s) = (" << l << ", " << s
        << ") do not give a strict Lyapunov function on the unit sphere"
        << " (min V = " << a.min_value << ", max dV/dt = " << a.max_derivative
        << ")";
    throw std::invalid_argument(msg.str());
  }
}

FTControllerParams FTControllerParams::unvalidated(double alpha, double l,
                                                   double s, double gamma) {
  return FTControllerParams(Unchecked{}, alpha, l, s, gamma);
}

Dilation FTControllerParams::dilation() const {
  return Dilation(Eigen::Vector2d(2.0 - alpha_, 1.0));
}

LyapunovAudit FTControllerParams::audit(std::size_t samples) const {
  LyapunovAudit out;
  out.min_value = std::numeric_limits<double>::infinity();
  out.max_derivative = -std::numeric_limits<double>::infinity();
  for (const Vector& z : sphere_samples(dilation(), samples)) {
    Eigen::Vector2d f(z(1), u_fts(z, alpha_));
    out.min_value = std::min(out.min_value, v_fts(z, *this));
    out.max_derivative = std::max(out.max_derivative, grad_v_fts(z, *this).dot(f));
    ++out.samples;
  }
  out.passed = out.min_value > 0.0 && out.max_derivative < 0.0;
  return out;
}

FxTAdaptiveParams::FxTAdaptiveParams(double theta_max, double gamma)
    : theta_max_(theta_max), gamma_(gamma) {
  check_positive(theta_max, "theta_max");
  check_positive(gamma, "gamma");
}

Vector adapt_ft(const Vector& x, const Vector& /*omega*/, const VectorField& phi,
                const Vector& b, const FTControllerParams& params) {
  const double grad_b = grad_v_fts(x, params).dot(b);
  return params.gamma() * grad_b * phi(x);
}

double u_adaptive_ft(const Vector& x, const Vector& omega, const VectorField& phi,
                     const FTControllerParams& params) {
  return u_fts(x, params.alpha()) - phi(x).dot(omega);
}

double u_adaptive_fxt(const Vector& x, const Vector& omega,
                      const ScalarField& u_fxts, const VectorField& phi,
                      const FxTAdaptiveParams& p) {
  return u_fxts(x) - phi(x).dot(theta_hat_fxt(omega, p));
}

Vector adapt_fxt(const Vector& x, const Vector& omega, const VectorField& phi,
                 double grad_v_b, const FxTAdaptiveParams& p) {
  const Vector ph = phi(x);
  if (ph.size() != omega.size()) {
    throw std::invalid_argument("adapt_fxt: regressor and estimate sizes differ");
  }
  const Vector scale = Vector::Ones(omega.size()) + omega.cwiseAbs2();
  return (p.gamma() / p.theta_max() * grad_v_b) * scale.cwiseProduct(ph);
}

Vector theta_hat_fxt(const Vector& omega, const FxTAdaptiveParams& p) {
  return p.theta_max() * omega.array().atan().matrix();
}

NominalLaw finite_time_law(const FTControllerParams& params) {
  return [params](const Vector& x) {
    NominalEvaluation e;
    e.u = u_fts(x, params.alpha());
    e.grad = grad_v_fts(x, params);
    e.lyapunov = v_fts(x, params);
    return e;
  };
}

SystemModel adaptive_ft_loop(const UncertainPlant& plant,
                             const FTControllerParams& params) {
  check_planar_plant(plant);
  const VectorField phi = [plant](const Vector& x) { return plant.regressor(x); };
  const Vector b = plant.B();
  ControlLaw control = [phi, params](const Vector& x, const Vector& omega) {
    return u_adaptive_ft(x, omega, phi, params);
  };
  AdaptationLaw adaptation = [phi, b, params](const Vector& x, const Vector& omega) {
    return adapt_ft(x, omega, phi, b, params);
  };
  return assemble_adaptive_loop(plant, std::move(control), std::move(adaptation));
}

SystemModel ft_feedback_loop(const UncertainPlant& plant,
                             const FTControllerParams& params) {
  check_planar_plant(plant);
  const double alpha = params.alpha();
  return assemble_feedback_loop(plant,
                                [alpha](const Vector& x) { return u_fts(x, alpha); });
}

SystemModel adaptive_fxt_loop(const UncertainPlant& plant, NominalLaw law,
                              const FxTAdaptiveParams& params) {
  const Eigen::Index n = plant.state_dim();
  const Eigen::Index q = plant.param_dim();
  // The nominal law is evaluated once per right-hand side call, so the
  // implicit solve is shared between control and adaptation.
  auto f = [plant, law, params, n, q](const Vector& xt) {
    const Vector x = xt.head(n);
    const Vector omega = xt.tail(q);
    const NominalEvaluation e = law(x);
    const Vector ph = plant.regressor(x);
    const double u = e.u - ph.dot(theta_hat_fxt(omega, params));
    const double grad_b = e.grad.dot(plant.B());
    Vector out(n + q);
    out.head(n) = plant_rhs(plant, x, u);
    const Vector scale = Vector::Ones(q) + omega.cwiseAbs2();
    out.tail(q) = (params.gamma() / params.theta_max() * grad_b) * scale.cwiseProduct(ph);
    return out;
  };
  auto h = [n](const Vector& xt) -> Vector { return xt.head(n); };
  SystemModel model(plant.name() + "/adaptive-fixed-time", n + q, n, f, h);
  model.set_control([plant, law, params, n, q](const Vector& xt) {
    const Vector x = xt.head(n);
    return law(x).u - plant.regressor(x).dot(theta_hat_fxt(xt.tail(q), params));
  });
  model.set_absorbing_dims(n);
  std::vector<std::string> labels;
  for (Eigen::Index i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i + 1));
  for (Eigen::Index i = 0; i < q; ++i) labels.push_back("omega" + std::to_string(i + 1));
  model.set_state_labels(std::move(labels));
  return model;
}

double adaptive_ft_lyapunov(const UncertainPlant& plant,
                            const FTControllerParams& params, const Vector& xt) {
  const auto s = ExtendedState::split(xt, plant.state_dim());
  return v_fts(s.x, params) +
         0.5 / params.gamma() * (plant.theta() - s.omega).squaredNorm();
}

double adaptive_fxt_lyapunov(const UncertainPlant& plant, const NominalLaw& law,
                             const FxTAdaptiveParams& params, const Vector& xt) {
  const auto s = ExtendedState::split(xt, plant.state_dim());
  return law(s.x).lyapunov +
         0.5 / params.gamma() *
             (plant.theta() - theta_hat_fxt(s.omega, params)).squaredNorm();
}

double omega_bound_ft(const UncertainPlant& plant, const FTControllerParams& params,
                      const Vector& xt0) {
  const double v0 = adaptive_ft_lyapunov(plant, params, xt0);
  return plant.theta().norm() + std::sqrt(2.0 * params.gamma() * v0);
}

}  // namespace ofts
