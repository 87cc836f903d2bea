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

// Sampled audits of output finite-time and fixed-time Lyapunov conditions for
// a candidate V = U + W, and the closed-form settling-time bounds that go with
// them.
//
// A pass is evidence over the given samples, not a proof. A failure always
// carries a concrete violating state.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ofts/dynamics.hpp"
#include "ofts/sim.hpp"
#include "ofts/types.hpp"

namespace ofts {

using ScalarMap = std::function<double(double)>;

/// V = U + W with U measuring the output and W >= 0 absorbing the rest.
/// Gradients are optional; missing ones fall back to central differences.
struct CertCandidate {
  ScalarField u;
  ScalarField w;
  GradientField grad_u;
  GradientField grad_w;
  /// Class-K-infinity sandwich xi1(|y|) <= U <= xi2(|y|); skipped when unset.
  ScalarMap xi1;
  ScalarMap xi2;
  /// W <= sigma(rho + |y|), fixed-time mode only; skipped when unset.
  ScalarMap sigma;
  double rho = 0.0;
};

enum class RateMode { kFiniteTime, kFixedTime };

/// Decay and cross-term rates.
///
/// Finite time: dV/dt <= -a U^alpha with alpha in (0, 1), every beta_i > alpha.
/// Fixed time: dV/dt <= -a1 U^alpha1 - a2 U^alpha2 with alpha1 in (0, 1),
/// alpha2 > 1 and every beta_i in (alpha1, alpha2).
/// In both modes |dW/dt| <= sum_i b_i U^beta_i.
struct RateParams {
  RateMode mode = RateMode::kFiniteTime;
  double a = 0.0;
  double alpha = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  std::vector<double> b;
  std::vector<double> beta;
  /// When set, b is recomputed at each sample with that sample taken as the
  /// initial state (coefficients allowed to depend on V(x(0))).
  std::function<std::vector<double>(const Vector& x0)> b_from_initial;

  static RateParams finite_time(double a, double alpha, std::vector<double> b,
                                std::vector<double> beta);
  static RateParams fixed_time(double a1, double a2, double alpha1, double alpha2,
                               std::vector<double> b, std::vector<double> beta);

  /// Throws std::invalid_argument on range violations.
  void validate() const;
  /// -a U^alpha, or -a1 U^alpha1 - a2 U^alpha2.
  double decay_bound(double u) const;
  /// sum_i b_i U^beta_i with the given coefficients.
  double cross_bound(double u, const std::vector<double>& coeffs) const;
};

struct CertOptions {
  double output_exclusion = 1e-6;  // samples with |h(x)| <= this are skipped
  double slack = 1e-8;             // relative to max(1, |lhs|, |rhs|)
  double fd_step = 1e-6;           // relative central-difference step
};

struct ConditionResult {
  std::string name;
  double worst_margin = 0.0;  // min over samples of (bound - value + slack)
  std::optional<Vector> worst_sample;
  std::size_t violations = 0;

  bool passed() const { return violations == 0; }
};

struct CertificationReport {
  std::vector<ConditionResult> conditions;
  std::size_t samples_used = 0;
  std::size_t samples_excluded = 0;
  bool passed = false;
  /// First sample (by index) that violates any condition.
  std::optional<Vector> violating_sample;

  /// Throws std::out_of_range for an unknown name.
  const ConditionResult& condition(const std::string& name) const;
};

/// Output finite-time conditions: "output_lower", "output_upper", "decay",
/// "cross_term" and "w_nonnegative".
CertificationReport check_ofts(const SystemModel& sys, const CertCandidate& cand,
                               const RateParams& rates, std::span<const Vector> samples,
                               const CertOptions& options = {});

/// Output fixed-time conditions: as check_ofts with the two-rate decay, plus
/// "w_bound".
CertificationReport check_ofxts(const SystemModel& sys, const CertCandidate& cand,
                                const RateParams& rates, std::span<const Vector> samples,
                                const CertOptions& options = {});

/// Central-difference gradient with step h * max(1, |x|).
RowVector numerical_gradient(const ScalarField& f, const Vector& x, double h = 1e-6);

/// Quasi-random Halton points in the box [lower, upper] (dimension <= 8).
std::vector<Vector> halton_box(std::size_t count, const Vector& lower, const Vector& upper,
                               std::size_t skip = 20);

// Settling-time bounds. Each throws std::invalid_argument on range violations.

/// V' <= -c V^mu, mu in (0, 1): V0^(1-mu) / (c (1-mu)).
double finite_time_settling_bound(double v0, double c, double mu);

/// V' <= -c V^mu, mu > 1: time to enter {V <= eps}, 1 / (c (mu-1) eps^(mu-1)).
double fixed_time_attraction_bound(double c, double mu, double eps);

/// V' <= -k1 V^mu - k2 V^nu: 1/(k1 (1-mu)) + 1/(k2 (nu-1)).
double fixed_time_settling_bound(double k1, double mu, double k2, double nu);

/// Output finite-time bound from the instant tau after which the cross term
/// is at most half the decay: tau + U_tau^(1-alpha) / (0.5 a (1-alpha)).
double ofts_settling_bound(double tau, double u_tau, double a, double alpha);

/// Output fixed-time bound
///   1/(0.5 a2 (alpha2-1) U_tau1^(alpha2-1)) + U_tau2^(1-alpha1)/(0.5 a1 (1-alpha1))
///   + (k1 - U_tau2)/k2.
double ofxts_settling_bound(double u_tau1, double u_tau2, double a1, double a2,
                            double alpha1, double alpha2, double k1, double k2);

/// Level thresholds of the fixed-time rates: above U_tau1 the cross term is
/// at most half of a2 U^alpha2, below U_tau2 at most half of a1 U^alpha1.
struct RateThresholds {
  double u_tau1 = 0.0;
  double u_tau2 = 0.0;
};

/// Scans a logarithmic grid over [1e-12, 1e12] and refines the boundary
/// crossings by bisection. U_tau2 is capped at `cap`; U_tau1 >= U_tau2. With no
/// cross term both equal `cap`. Throws Infeasible when either inequality
/// fails at the end of the grid where it must hold.
RateThresholds find_rate_thresholds(const RateParams& rates, double cap = 1.0);

/// k1 = U_tau1 + sigma(rho + xi1^-1(U_tau1)), k2 = a1 U_tau2^alpha1 + a2 U_tau2^alpha2.
std::pair<double, double> ofxts_level_constants(const RateParams& rates,
                                                const RateThresholds& th,
                                                const CertCandidate& cand);

/// Inverse of an increasing function with f(0) = 0 by bisection.
double invert_increasing(const ScalarMap& f, double value, double tol = 1e-12);

/// From a simulated trajectory: the first sample time tau after which
/// -a U^alpha + sum b U^beta <= -0.5 a U^alpha holds at every later sample,
/// together with U(x(tau)). Coefficients come from the trajectory's initial
/// state when b_from_initial is set. Absent if the last sample violates it.
struct ThresholdInstant {
  double tau = 0.0;
  double u_tau = 0.0;
};
std::optional<ThresholdInstant> ofts_threshold_instant(const Trajectory& traj,
                                                       const CertCandidate& cand,
                                                       const RateParams& rates);

/// U = |x1|^1.5, W = 0.75 x2^2 with analytic gradients.
CertCandidate example1_candidate();
/// a = 1.5, alpha = 2/3, beta = 1 and b1 = 2 V(x(0)).
RateParams example1_rates();
/// U = |x1|^1.5, W = 3 (1 + cos x2), sigma = identity, rho = 6.
CertCandidate example2_candidate();
/// a1 = a2 = 1.5, alpha1 = 2/3, alpha2 = 5/3, b1 = 6, beta1 = 1.
RateParams example2_rates();

}  // namespace ofts
