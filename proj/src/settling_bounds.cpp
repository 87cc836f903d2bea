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

#include <cmath>
#include <stdexcept>
#include <string>

#include "ofts/certify.hpp"
#include "ofts/errors.hpp"

namespace ofts {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Sign of the threshold inequalities after dividing by U^alpha1 (inner) or
// U^alpha2 (outer); the inequality holds where the value is <= 0.
double inner_excess(const RateParams& r, double u) {
  double s = -0.5 * r.a1 - r.a2 * std::pow(u, r.alpha2 - r.alpha1);
  for (std::size_t i = 0; i < r.b.size(); ++i) s += r.b[i] * std::pow(u, r.beta[i] - r.alpha1);
  return s;
}

double outer_excess(const RateParams& r, double u) {
  double s = -r.a1 * std::pow(u, r.alpha1 - r.alpha2) - 0.5 * r.a2;
  for (std::size_t i = 0; i < r.b.size(); ++i) s += r.b[i] * std::pow(u, r.beta[i] - r.alpha2);
  return s;
}

// Bisection in log u between a point where `g` holds and one where it fails;
// returns the end where it holds.
template <typename G>
double refine(const G& g, double holds, double fails) {
  for (int i = 0; i < 200; ++i) {
    const double mid = std::sqrt(holds * fails);
    if (mid == holds || mid == fails) break;
    if (g(mid) <= 0.0) {
      holds = mid;
    } else {
      fails = mid;
    }
  }
  return holds;
}

}  // namespace

double finite_time_settling_bound(double v0, double c, double mu) {
  require(v0 >= 0.0, "finite_time_settling_bound: V0 must be nonnegative");
  require(c > 0.0, "finite_time_settling_bound: c must be positive");
  require(mu > 0.0 && mu < 1.0, "finite_time_settling_bound: mu must lie in (0, 1)");
  return std::pow(v0, 1.0 - mu) / (c * (1.0 - mu));
}

double fixed_time_attraction_bound(double c, double mu, double eps) {
  require(c > 0.0, "fixed_time_attraction_bound: c must be positive");
  require(mu > 1.0, "fixed_time_attraction_bound: mu must exceed 1");
  require(eps > 0.0, "fixed_time_attraction_bound: eps must be positive");
  return 1.0 / (c * (mu - 1.0) * std::pow(eps, mu - 1.0));
}

double fixed_time_settling_bound(double k1, double mu, double k2, double nu) {
  require(k1 > 0.0 && k2 > 0.0, "fixed_time_settling_bound: k1 and k2 must be positive");
  require(mu > 0.0 && mu < 1.0, "fixed_time_settling_bound: mu must lie in (0, 1)");
  require(nu > 1.0, "fixed_time_settling_bound: nu must exceed 1");
  return 1.0 / (k1 * (1.0 - mu)) + 1.0 / (k2 * (nu - 1.0));
}

double ofts_settling_bound(double tau, double u_tau, double a, double alpha) {
  require(tau >= 0.0 && u_tau >= 0.0, "ofts_settling_bound: tau and U_tau must be nonnegative");
  require(a > 0.0, "ofts_settling_bound: a must be positive");
  require(alpha > 0.0 && alpha < 1.0, "ofts_settling_bound: alpha must lie in (0, 1)");
  return tau + std::pow(u_tau, 1.0 - alpha) / (0.5 * a * (1.0 - alpha));
}

double ofxts_settling_bound(double u_tau1, double u_tau2, double a1, double a2,
                            double alpha1, double alpha2, double k1, double k2) {
  require(u_tau2 > 0.0 && u_tau2 <= u_tau1, "ofxts_settling_bound: need 0 < U_tau2 <= U_tau1");
  require(k1 >= u_tau2, "ofxts_settling_bound: need k1 >= U_tau2");
  require(k2 > 0.0 && a1 > 0.0 && a2 > 0.0, "ofxts_settling_bound: rates must be positive");
  require(alpha1 > 0.0 && alpha1 < 1.0, "ofxts_settling_bound: alpha1 must lie in (0, 1)");
  require(alpha2 > 1.0, "ofxts_settling_bound: alpha2 must exceed 1");
  return 1.0 / (0.5 * a2 * (alpha2 - 1.0) * std::pow(u_tau1, alpha2 - 1.0)) +
         std::pow(u_tau2, 1.0 - alpha1) / (0.5 * a1 * (1.0 - alpha1)) + (k1 - u_tau2) / k2;
}

RateThresholds find_rate_thresholds(const RateParams& rates, double cap) {
  rates.validate();
  require(rates.mode == RateMode::kFixedTime, "find_rate_thresholds: fixed-time rates required");
  require(cap > 0.0, "find_rate_thresholds: cap must be positive");
  require(!rates.b_from_initial, "find_rate_thresholds: state-dependent b is not supported");
  if (rates.b.empty()) return {cap, cap};

  constexpr int kPerDecade = 20;
  constexpr int kDecades = 24;
  auto grid = [](int k) { return std::pow(10.0, -12.0 + static_cast<double>(k) / kPerDecade); };
  constexpr int kLast = kDecades * kPerDecade;
  auto inner = [&](double u) { return inner_excess(rates, u); };
  auto outer = [&](double u) { return outer_excess(rates, u); };

  if (inner(grid(0)) > 0.0) {
    throw Infeasible("find_rate_thresholds: cross term dominates a1 U^alpha1 near zero");
  }
  if (outer(grid(kLast)) > 0.0) {
    throw Infeasible("find_rate_thresholds: cross term dominates a2 U^alpha2 at large U");
  }

  RateThresholds th;
  th.u_tau2 = cap;
  for (int k = 1; k <= kLast; ++k) {
    if (inner(grid(k)) > 0.0) {
      th.u_tau2 = std::min(cap, refine(inner, grid(k - 1), grid(k)));
      break;
    }
  }
  th.u_tau1 = std::max(th.u_tau2, cap);
  for (int k = kLast - 1; k >= 0; --k) {
    if (outer(grid(k)) > 0.0) {
      th.u_tau1 = std::max(th.u_tau2, refine(outer, grid(k + 1), grid(k)));
      break;
    }
  }
  return th;
}

double invert_increasing(const ScalarMap& f, double value, double tol) {
  require(static_cast<bool>(f), "invert_increasing: function required");
  require(value >= 0.0, "invert_increasing: value must be nonnegative");
  if (value == 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; f(hi) < value; ++i) {
    lo = hi;
    hi *= 2.0;
    if (i > 2000 || !std::isfinite(hi)) {
      throw NumericalFailure("invert_increasing: value is out of range");
    }
  }
  for (int i = 0; i < 400 && hi - lo > tol * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < value) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::pair<double, double> ofxts_level_constants(const RateParams& rates,
                                                const RateThresholds& th,
                                                const CertCandidate& cand) {
  rates.validate();
  require(rates.mode == RateMode::kFixedTime, "ofxts_level_constants: fixed-time rates required");
  require(static_cast<bool>(cand.sigma) && static_cast<bool>(cand.xi1),
          "ofxts_level_constants: candidate needs sigma and xi1");
  const double k1 = th.u_tau1 + cand.sigma(cand.rho + invert_increasing(cand.xi1, th.u_tau1));
  const double k2 = rates.a1 * std::pow(th.u_tau2, rates.alpha1) +
                    rates.a2 * std::pow(th.u_tau2, rates.alpha2);
  return {k1, k2};
}

}  // namespace ofts
