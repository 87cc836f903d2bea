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

#include "ofts/certify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ofts/homogeneity.hpp"

namespace ofts {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_exponents(const std::vector<double>& b, const std::vector<double>& beta,
                     bool b_dynamic) {
  if (beta.empty() && !b.empty()) throw std::invalid_argument("RateParams: b given without beta");
  if (!b_dynamic && b.size() != beta.size()) {
    throw std::invalid_argument("RateParams: b and beta must have equal length");
  }
  for (double bi : b) {
    if (!(bi > 0.0)) throw std::invalid_argument("RateParams: every b_i must be positive");
  }
}

// Accumulates one condition's worst margin over the samples.
class Condition {
 public:
  explicit Condition(std::string name) { result_.name = std::move(name); result_.worst_margin = kInf; }

  // Records bound - value with relative slack; returns false on violation.
  bool record(double bound, double value, double slack, const Vector& x) {
    const double scale = std::max({1.0, std::abs(bound), std::abs(value)});
    double margin = bound - value + slack * scale;
    if (std::isnan(margin)) margin = -kInf;
    if (margin < result_.worst_margin) {
      result_.worst_margin = margin;
      result_.worst_sample = x;
    }
    if (margin < 0.0) {
      ++result_.violations;
      return false;
    }
    return true;
  }

  const ConditionResult& result() const { return result_; }

 private:
  ConditionResult result_;
};

CertificationReport run_checks(const SystemModel& sys, const CertCandidate& cand,
                               const RateParams& rates, std::span<const Vector> samples,
                               const CertOptions& options, bool fixed_time) {
  rates.validate();
  if (fixed_time != (rates.mode == RateMode::kFixedTime)) {
    throw std::invalid_argument(fixed_time ? "check_ofxts: fixed-time rates required"
                                           : "check_ofts: finite-time rates required");
  }
  if (!cand.u || !cand.w) throw std::invalid_argument("certify: U and W are required");
  if (samples.empty()) throw std::invalid_argument("certify: no samples");
  if (!(options.output_exclusion >= 0.0) || !(options.slack >= 0.0) || !(options.fd_step > 0.0)) {
    throw std::invalid_argument("certify: invalid options");
  }

  Condition lower("output_lower");
  Condition upper("output_upper");
  Condition decay("decay");
  Condition cross("cross_term");
  Condition w_nonneg("w_nonnegative");
  Condition w_bound("w_bound");
  const bool use_sigma = fixed_time && static_cast<bool>(cand.sigma);

  CertificationReport rep;
  for (const Vector& x : samples) {
    const double y = sys.output(x).norm();
    if (y <= options.output_exclusion) {
      ++rep.samples_excluded;
      continue;
    }
    ++rep.samples_used;
    const double u = cand.u(x);
    const double w = cand.w(x);
    const Vector f = sys.rhs(x);
    const RowVector gu = cand.grad_u ? cand.grad_u(x) : numerical_gradient(cand.u, x, options.fd_step);
    const RowVector gw = cand.grad_w ? cand.grad_w(x) : numerical_gradient(cand.w, x, options.fd_step);
    const double du = gu.dot(f.transpose());
    const double dw = gw.dot(f.transpose());
    const std::vector<double> b = rates.b_from_initial ? rates.b_from_initial(x) : rates.b;
    if (b.size() != rates.beta.size()) {
      throw std::invalid_argument("certify: b and beta must have equal length");
    }

    bool ok = true;
    if (cand.xi1) ok &= lower.record(u, cand.xi1(y), options.slack, x);
    if (cand.xi2) ok &= upper.record(cand.xi2(y), u, options.slack, x);
    ok &= decay.record(rates.decay_bound(u), du + dw, options.slack, x);
    ok &= cross.record(rates.cross_bound(u, b), std::abs(dw), options.slack, x);
    ok &= w_nonneg.record(w, 0.0, options.slack, x);
    if (use_sigma) ok &= w_bound.record(cand.sigma(cand.rho + y), w, options.slack, x);
    if (!ok && !rep.violating_sample) rep.violating_sample = x;
  }

  if (cand.xi1) rep.conditions.push_back(lower.result());
  if (cand.xi2) rep.conditions.push_back(upper.result());
  rep.conditions.push_back(decay.result());
  rep.conditions.push_back(cross.result());
  rep.conditions.push_back(w_nonneg.result());
  if (use_sigma) rep.conditions.push_back(w_bound.result());
  rep.passed = rep.samples_used > 0 &&
               std::all_of(rep.conditions.begin(), rep.conditions.end(),
                           [](const ConditionResult& c) { return c.passed(); });
  return rep;
}

double radical_inverse(std::size_t index, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double out = 0.0;
  while (index > 0) {
    out += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return out;
}

}  // namespace

RateParams RateParams::finite_time(double a, double alpha, std::vector<double> b,
                                   std::vector<double> beta) {
  RateParams r;
  r.mode = RateMode::kFiniteTime;
  r.a = a;
  r.alpha = alpha;
  r.b = std::move(b);
  r.beta = std::move(beta);
  r.validate();
  return r;
}

RateParams RateParams::fixed_time(double a1, double a2, double alpha1, double alpha2,
                                  std::vector<double> b, std::vector<double> beta) {
  RateParams r;
  r.mode = RateMode::kFixedTime;
  r.a1 = a1;
  r.a2 = a2;
  r.alpha1 = alpha1;
  r.alpha2 = alpha2;
  r.b = std::move(b);
  r.beta = std::move(beta);
  r.validate();
  return r;
}

void RateParams::validate() const {
  check_exponents(b, beta, static_cast<bool>(b_from_initial));
  if (mode == RateMode::kFiniteTime) {
    if (!(a > 0.0)) throw std::invalid_argument("RateParams: a must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("RateParams: alpha must lie in (0, 1)");
    for (double bt : beta) {
      if (!(bt > alpha)) throw std::invalid_argument("RateParams: every beta_i must exceed alpha");
    }
    return;
  }
  if (!(a1 > 0.0 && a2 > 0.0)) throw std::invalid_argument("RateParams: a1 and a2 must be positive");
  if (!(alpha1 > 0.0 && alpha1 < 1.0)) {
    throw std::invalid_argument("RateParams: alpha1 must lie in (0, 1)");
  }
  if (!(alpha2 > 1.0)) throw std::invalid_argument("RateParams: alpha2 must exceed 1");
  for (double bt : beta) {
    if (!(bt > alpha1 && bt < alpha2)) {
      throw std::invalid_argument("RateParams: every beta_i must lie in (alpha1, alpha2)");
    }
  }
}

double RateParams::decay_bound(double u) const {
  if (mode == RateMode::kFiniteTime) return -a * std::pow(u, alpha);
  return -a1 * std::pow(u, alpha1) - a2 * std::pow(u, alpha2);
}

double RateParams::cross_bound(double u, const std::vector<double>& coeffs) const {
  double s = 0.0;
  for (std::size_t i = 0; i < beta.size() && i < coeffs.size(); ++i) {
    s += coeffs[i] * std::pow(u, beta[i]);
  }
  return s;
}

const ConditionResult& CertificationReport::condition(const std::string& name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("CertificationReport: no condition '" + name + "'");
}

CertificationReport check_ofts(const SystemModel& sys, const CertCandidate& cand,
                               const RateParams& rates, std::span<const Vector> samples,
                               const CertOptions& options) {
  return run_checks(sys, cand, rates, samples, options, false);
}

CertificationReport check_ofxts(const SystemModel& sys, const CertCandidate& cand,
                                const RateParams& rates, std::span<const Vector> samples,
                                const CertOptions& options) {
  return run_checks(sys, cand, rates, samples, options, true);
}

RowVector numerical_gradient(const ScalarField& f, const Vector& x, double h) {
  const double step = h * std::max(1.0, x.norm());
  RowVector g(x.size());
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + step;
    const double fp = f(xp);
    xp(i) = x(i) - step;
    const double fm = f(xp);
    xp(i) = x(i);
    g(i) = (fp - fm) / (2.0 * step);
  }
  return g;
}

std::vector<Vector> halton_box(std::size_t count, const Vector& lower, const Vector& upper,
                               std::size_t skip) {
  static constexpr std::array<unsigned, 8> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19};
  if (lower.size() != upper.size() || lower.size() == 0 ||
      lower.size() > static_cast<Eigen::Index>(kPrimes.size())) {
    throw std::invalid_argument("halton_box: box dimension must be in [1, 8]");
  }
  if (!(upper.array() > lower.array()).all()) {
    throw std::invalid_argument("halton_box: empty box");
  }
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Vector x(lower.size());
    for (Eigen::Index d = 0; d < x.size(); ++d) {
      const double q = radical_inverse(i + skip + 1, kPrimes[static_cast<std::size_t>(d)]);
      x(d) = lower(d) + q * (upper(d) - lower(d));
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::optional<ThresholdInstant> ofts_threshold_instant(const Trajectory& traj,
                                                       const CertCandidate& cand,
                                                       const RateParams& rates) {
  rates.validate();
  if (rates.mode != RateMode::kFiniteTime) {
    throw std::invalid_argument("ofts_threshold_instant: finite-time rates required");
  }
  if (traj.size() == 0) throw std::invalid_argument("ofts_threshold_instant: empty trajectory");
  const std::vector<double> b =
      rates.b_from_initial ? rates.b_from_initial(traj.state(0)) : rates.b;
  auto holds = [&](Eigen::Index i) {
    const double u = cand.u(traj.state(i));
    return rates.cross_bound(u, b) <= 0.5 * rates.a * std::pow(u, rates.alpha);
  };
  Eigen::Index first = 0;
  for (Eigen::Index i = traj.size(); i-- > 0;) {
    if (!holds(i)) {
      first = i + 1;
      break;
    }
  }
  if (first == traj.size()) return std::nullopt;
  return ThresholdInstant{traj.times(first), cand.u(traj.state(first))};
}

CertCandidate example1_candidate() {
  CertCandidate c;
  c.u = [](const Vector& x) { return std::pow(std::abs(x(0)), 1.5); };
  c.w = [](const Vector& x) { return 0.75 * x(1) * x(1); };
  c.grad_u = [](const Vector& x) {
    RowVector g(2);
    g << 1.5 * sign_power(x(0), 0.5), 0.0;
    return g;
  };
  c.grad_w = [](const Vector& x) {
    RowVector g(2);
    g << 0.0, 1.5 * x(1);
    return g;
  };
  c.xi1 = [](double s) { return std::pow(s, 1.5); };
  c.xi2 = c.xi1;
  return c;
}

RateParams example1_rates() {
  RateParams r;
  r.mode = RateMode::kFiniteTime;
  r.a = 1.5;
  r.alpha = 2.0 / 3.0;
  r.beta = {1.0};
  const CertCandidate c = example1_candidate();
  r.b_from_initial = [c](const Vector& x0) {
    return std::vector<double>{2.0 * (c.u(x0) + c.w(x0))};
  };
  r.validate();
  return r;
}

CertCandidate example2_candidate() {
  CertCandidate c = example1_candidate();
  c.w = [](const Vector& x) { return 3.0 * (1.0 + std::cos(x(1))); };
  c.grad_w = [](const Vector& x) {
    RowVector g(2);
    g << 0.0, -3.0 * std::sin(x(1));
    return g;
  };
  c.sigma = [](double s) { return s; };
  c.rho = 6.0;
  return c;
}

RateParams example2_rates() {
  return RateParams::fixed_time(1.5, 1.5, 2.0 / 3.0, 5.0 / 3.0, {6.0}, {1.0});
}

}  // namespace ofts
