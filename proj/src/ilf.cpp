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

#include "ofts/ilf.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ofts/errors.hpp"
#include "ofts/linalg.hpp"

namespace ofts {
namespace {

void check_state(const Vector& x, Eigen::Index n, const char* what) {
  if (x.size() != n) {
    throw std::invalid_argument(std::string(what) + ": state has dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(n));
  }
}

// D_r(1/v) x.
Vector scaled_state(const Vector& x, double v, const Vector& r) {
  Vector z(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) z(i) = x(i) * std::pow(v, -r(i));
  return z;
}

Matrix symmetric_inverse(const Matrix& x) {
  Matrix inv = x.ldlt().solve(Matrix::Identity(x.rows(), x.cols()));
  return 0.5 * (inv + inv.transpose());
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix weight_sum(const Matrix& x, const Vector& r) {
  const Matrix h = r.asDiagonal();
  return x * h + h * x;
}

Matrix decay_matrix(const Matrix& a, const Vector& b, const Matrix& x,
                    const RowVector& y) {
  const Matrix by = b * y;
  return a * x + x * a.transpose() + by + by.transpose();
}

}  // namespace

void ILFSolveConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("ILFSolveConfig: tol must be positive");
  if (!(v_min > 0.0 && v_min < 1.0)) {
    throw std::invalid_argument("ILFSolveConfig: v_min must lie in (0, 1)");
  }
  if (max_iter <= 0) throw std::invalid_argument("ILFSolveConfig: max_iter must be positive");
  if (!(bracket_growth > 1.0)) {
    throw std::invalid_argument("ILFSolveConfig: bracket_growth must exceed 1");
  }
}

ILFParams::ILFParams(Matrix x, RowVector y, double nu1, double nu2, Vector r1,
                     Vector r2, double zeta1, double zeta2, double zeta3)
    : x_(std::move(x)),
      y_(std::move(y)),
      nu1_(nu1),
      nu2_(nu2),
      r1_(std::move(r1)),
      r2_(std::move(r2)),
      zeta1_(zeta1),
      zeta2_(zeta2),
      zeta3_(zeta3) {
  const Eigen::Index n = x_.rows();
  if (n == 0 || x_.cols() != n) throw std::invalid_argument("ILFParams: X must be square");
  if (y_.size() != n || r1_.size() != n || r2_.size() != n) {
    throw std::invalid_argument("ILFParams: Y, r1 and r2 must match the size of X");
  }
  if (max_abs(x_ - x_.transpose()) > 1e-12 * std::max(1.0, max_abs(x_))) {
    throw std::invalid_argument("ILFParams: X is not symmetric");
  }
  x_ = 0.5 * (x_ + x_.transpose()).eval();
  if (!(eig_sym(x_)(0) > 0.0)) {
    throw std::invalid_argument("ILFParams: X is not positive definite");
  }
  if (!(nu1_ > -1.0 && nu1_ < 0.0)) throw std::invalid_argument("ILFParams: nu1 must lie in (-1, 0)");
  if (!(nu2_ > 0.0)) throw std::invalid_argument("ILFParams: nu2 must be positive");
  if (!(r1_.minCoeff() > 0.0) || !(r2_.minCoeff() > 0.0)) {
    throw std::invalid_argument("ILFParams: weights must be positive");
  }
  if (!(zeta1_ > 0.0 && zeta2_ > 0.0 && zeta3_ > 0.0)) {
    throw std::invalid_argument("ILFParams: zeta1, zeta2, zeta3 must be positive");
  }
  x_inv_ = symmetric_inverse(x_);
  // k = Y X^-1, i.e. k^T = X^-1 Y^T for symmetric X.
  k_ = x_.ldlt().solve(y_.transpose()).transpose();
}

double ILFParams::control_exponent(IlfBranch b) const {
  const Vector& r = weights(b);
  return r(r.size() - 1) + degree(b);
}

double ILFParams::level(const Vector& x) const {
  check_state(x, dim(), "ILFParams::level");
  return x.dot(x_inv_ * x);
}

IlfBranch ILFParams::region(const Vector& x) const {
  return level(x) < 1.0 ? IlfBranch::kInner : IlfBranch::kOuter;
}

std::pair<Vector, Vector> planar_ilf_weights(double nu1, double nu2) {
  if (!(nu1 > -1.0 && nu1 < 0.0) || !(nu2 > 0.0)) {
    throw std::invalid_argument("planar_ilf_weights: need nu1 in (-1, 0) and nu2 > 0");
  }
  return {Eigen::Vector2d(1.0 - nu1, 1.0), Eigen::Vector2d(1.0, 1.0 + nu2)};
}

double q_function(double v, const Vector& x, const Matrix& X, const Vector& r) {
  if (!(v > 0.0)) throw std::invalid_argument("q_function: V must be positive");
  if (X.rows() != X.cols() || x.size() != X.rows() || r.size() != x.size()) {
    throw std::invalid_argument("q_function: dimension mismatch");
  }
  const Vector z = scaled_state(x, v, r);
  return z.dot(X.ldlt().solve(z)) - 1.0;
}

double q_function(double v, const Vector& x, const ILFParams& params,
                  IlfBranch branch) {
  if (!(v > 0.0)) throw std::invalid_argument("q_function: V must be positive");
  check_state(x, params.dim(), "q_function");
  const Vector z = scaled_state(x, v, params.weights(branch));
  return z.dot(params.X_inv() * z) - 1.0;
}

IlfSolution solve_ilf_detailed(const Vector& x, const ILFParams& params,
                               const ILFSolveConfig& cfg) {
  cfg.validate();
  check_state(x, params.dim(), "solve_ilf");
  if (x.isZero(0.0)) throw std::domain_error("solve_ilf: V is not defined implicitly at 0");

  IlfSolution sol;
  const double q1 = params.level(x) - 1.0;  // Q at V = 1 for either weight vector
  sol.branch = q1 < 0.0 ? IlfBranch::kInner : IlfBranch::kOuter;
  sol.v = 1.0;
  if (std::abs(q1) <= cfg.tol) return sol;

  auto q = [&](double v) { return q_function(v, x, params, sol.branch); };
  double lo = 1.0;
  double hi = 1.0;
  if (sol.branch == IlfBranch::kInner) {
    lo = cfg.v_min;
    // Below the clamp the state is treated as having reached the origin.
    if (q(lo) <= 0.0) {
      sol.v = lo;
      return sol;
    }
  } else {
    hi = cfg.bracket_growth;
    while (q(hi) > 0.0) {
      lo = hi;
      hi *= cfg.bracket_growth;
      if (!std::isfinite(hi)) {
        throw IlfSolveError("solve_ilf: could not bracket the root", lo, hi);
      }
    }
  }

  // Geometric midpoints: the root can sit anywhere across many decades.
  for (sol.iterations = 1; sol.iterations <= cfg.max_iter; ++sol.iterations) {
    const double mid = std::sqrt(lo * hi);
    const double qm = q(mid);
    if (std::abs(qm) <= cfg.tol) {
      sol.v = mid;
      return sol;
    }
    if (qm > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  std::ostringstream msg;
  msg << "solve_ilf: no root within " << cfg.max_iter << " iterations, bracket [" << lo
      << ", " << hi << "]";
  throw IlfSolveError(msg.str(), lo, hi);
}

double solve_ilf(const Vector& x, const ILFParams& params, const ILFSolveConfig& cfg) {
  return solve_ilf_detailed(x, params, cfg).v;
}

RowVector ilf_gradient(const Vector& x, double v, const ILFParams& params,
                       IlfBranch branch) {
  check_state(x, params.dim(), "ilf_gradient");
  if (!(v > 0.0)) throw std::invalid_argument("ilf_gradient: V must be positive");
  const Vector& r = params.weights(branch);
  const Vector d = scaled_state(Vector::Ones(x.size()), v, r);
  const Vector z = d.cwiseProduct(x);
  const Vector w = params.X_inv() * z;
  const RowVector dq_dx = 2.0 * w.cwiseProduct(d).transpose();
  // z^T (H X^-1 + X^-1 H) z = 2 z^T H X^-1 z.
  const double dq_dv = -2.0 / v * z.cwiseProduct(r).dot(w);
  if (std::abs(dq_dv) < 1e-14) {
    throw NumericalFailure("ilf_gradient: dQ/dV vanishes, level set is degenerate");
  }
  return -dq_dx / dq_dv;
}

IlfBranch surface_branch(const Vector& x, const Vector& xdot, const ILFParams& params) {
  check_state(xdot, params.dim(), "surface_branch");
  return x.dot(params.X_inv() * xdot) > 0.0 ? IlfBranch::kOuter : IlfBranch::kInner;
}

namespace {

double control_value(const Vector& x, double v, const ILFParams& params, IlfBranch b) {
  const Vector z = scaled_state(x, v, params.weights(b));
  return std::pow(v, params.control_exponent(b)) * params.k().dot(z);
}

}  // namespace

double u_fxts(const Vector& x, const ILFParams& params, const ILFSolveConfig& cfg) {
  check_state(x, params.dim(), "u_fxts");
  if (x.isZero(0.0)) return 0.0;
  const IlfSolution sol = solve_ilf_detailed(x, params, cfg);
  return control_value(x, sol.v, params, sol.branch);
}

NominalLaw fixed_time_law(const Matrix& a, const Vector& b, const ILFParams& params,
                          const ILFSolveConfig& cfg, double surface_tol) {
  if (a.rows() != params.dim() || a.cols() != params.dim() || b.size() != params.dim()) {
    throw std::invalid_argument("fixed_time_law: plant and parameter sizes differ");
  }
  cfg.validate();
  const Matrix a_cl = a + b * params.k();
  return [a_cl, params, cfg, surface_tol](const Vector& x) {
    NominalEvaluation e;
    if (x.isZero(0.0)) {
      e.grad = RowVector::Zero(x.size());
      return e;
    }
    const IlfSolution sol = solve_ilf_detailed(x, params, cfg);
    IlfBranch branch = sol.branch;
    if (std::abs(params.level(x) - 1.0) <= surface_tol) {
      branch = surface_branch(x, a_cl * x, params);
    }
    e.u = control_value(x, sol.v, params, sol.branch);
    e.grad = ilf_gradient(x, sol.v, params, branch);
    e.lyapunov = sol.v;
    return e;
  };
}

LmiReport verify_lmi(const Matrix& a, const Vector& b, const ILFParams& params) {
  const Eigen::Index n = params.dim();
  if (a.rows() != n || a.cols() != n || b.size() != n) {
    throw std::invalid_argument("verify_lmi: plant and parameter sizes differ");
  }
  const Matrix& x = params.X();
  LmiReport rep;
  rep.x_min_eig = eig_sym(x)(0);
  const Matrix s = decay_matrix(a, b, x, params.Y()) + params.zeta1() * x;
  rep.decay = -eig_sym(s)(n - 1);
  const Matrix m1 = weight_sum(x, params.r1());
  const Matrix m2 = weight_sum(x, params.r2());
  rep.inner_upper = eig_sym(Matrix(params.zeta2() * x - m1))(0);
  rep.inner_lower = eig_sym(m1)(0);
  rep.outer_upper = eig_sym(Matrix(params.zeta3() * x - m2))(0);
  rep.outer_lower = eig_sym(m2)(0);
  // The upper bounds are non-strict; allow round-off relative to their size.
  const double tol2 = 1e-12 * std::max(1.0, max_abs(params.zeta2() * x));
  const double tol3 = 1e-12 * std::max(1.0, max_abs(params.zeta3() * x));
  rep.passed = rep.x_min_eig > 0.0 && rep.decay > 0.0 && rep.inner_upper >= -tol2 &&
               rep.inner_lower > 0.0 && rep.outer_upper >= -tol3 && rep.outer_lower > 0.0;
  return rep;
}

namespace {

struct SearchPoint {
  Matrix l;      // Cholesky factor of X, lower triangular
  RowVector y;
};

struct Margins {
  double decay = 0.0;   // lambda_min(-L^-1 S L^-T)
  double inner = 0.0;   // lambda_min(L^-1 M1 L^-T)
  double outer = 0.0;
  double inner_max = 0.0;
  double outer_max = 0.0;
  double objective = -std::numeric_limits<double>::infinity();
};

// Unpacks a parameter vector: log-diagonal and strict lower part of L, then Y.
SearchPoint unpack(const Vector& p, Eigen::Index n, double y_bound) {
  SearchPoint s;
  s.l = Matrix::Zero(n, n);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      s.l(i, j) = (i == j) ? std::exp(p(idx)) : p(idx);
      ++idx;
    }
  }
  s.l /= s.l.norm();  // trace(L L^T) = 1
  s.y = p.tail(n).transpose().cwiseMax(-y_bound).cwiseMin(y_bound);
  return s;
}

Matrix congruence(const Matrix& l, const Matrix& m) {
  const auto tri = l.triangularView<Eigen::Lower>();
  const Matrix left = tri.solve(m);                          // L^-1 M
  const Matrix both = tri.solve(left.transpose()).transpose();  // L^-1 M L^-T
  return 0.5 * (both + both.transpose());
}

Margins evaluate(const SearchPoint& s, const Matrix& a, const Vector& b,
                 const Vector& r1, const Vector& r2, double max_condition) {
  const Eigen::Index n = a.rows();
  const Matrix x = s.l * s.l.transpose();
  Margins m;
  const Vector es = eig_sym(congruence(s.l, -decay_matrix(a, b, x, s.y)));
  const Vector e1 = eig_sym(congruence(s.l, weight_sum(x, r1)));
  const Vector e2 = eig_sym(congruence(s.l, weight_sum(x, r2)));
  m.decay = es(0);
  m.inner = e1(0);
  m.outer = e2(0);
  m.inner_max = e1(n - 1);
  m.outer_max = e2(n - 1);
  const Vector ex = eig_sym(x);
  const double cond = ex(n - 1) / ex(0);
  const double penalty = std::max(0.0, std::log(cond) - std::log(max_condition));
  m.objective = std::min({m.decay, m.inner, m.outer}) - penalty;
  if (!std::isfinite(m.objective)) m.objective = -std::numeric_limits<double>::infinity();
  return m;
}

}  // namespace

ILFParams synthesize_lmi(const Matrix& a, const Vector& b, const Vector& r1,
                         const Vector& r2, double nu1, double nu2, std::uint64_t seed,
                         const SynthesisOptions& options) {
  const Eigen::Index n = a.rows();
  if (n == 0 || a.cols() != n || b.size() != n || r1.size() != n || r2.size() != n) {
    throw std::invalid_argument("synthesize_lmi: dimension mismatch");
  }
  if (n > 4) throw std::invalid_argument("synthesize_lmi: only n <= 4 is supported");
  if (options.budget <= 0 || !(options.y_bound > 0.0) || !(options.max_condition > 1.0) ||
      !(options.slack >= 0.0)) {
    throw std::invalid_argument("synthesize_lmi: invalid options");
  }
  if (!is_controllable(a, b)) {
    throw SynthesisFailure("synthesize_lmi: (A, B) is not controllable");
  }

  const Eigen::Index n_l = n * (n + 1) / 2;
  Vector p = Vector::Zero(n_l + n);
  p.tail(n).setConstant(-1.0);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, p.size() - 1);
  std::normal_distribution<double> gauss;

  Margins best = evaluate(unpack(p, n, options.y_bound), a, b, r1, r2,
                          options.max_condition);
  double step = 1.0;
  int evals = 1;
  int since_improvement = 0;
  while (evals < options.budget && step > 1e-6) {
    const Eigen::Index i = pick(rng);
    Vector trial = p;
    trial(i) += step * gauss(rng);
    const Margins m = evaluate(unpack(trial, n, options.y_bound), a, b, r1, r2,
                               options.max_condition);
    ++evals;
    if (m.objective > best.objective) {
      p = trial;
      best = m;
      since_improvement = 0;
    } else if (++since_improvement >= 8 * p.size()) {
      step *= 0.5;
      since_improvement = 0;
    }
  }
  if (!(best.objective > 0.0)) {
    std::ostringstream msg;
    msg << "synthesize_lmi: best margin " << best.objective << " after " << evals
        << " evaluations";
    throw SynthesisFailure(msg.str());
  }

  const SearchPoint s = unpack(p, n, options.y_bound);
  const Matrix x = s.l * s.l.transpose();
  ILFParams params(0.5 * (x + x.transpose()), s.y, nu1, nu2, r1, r2, 0.5 * best.decay,
                   (1.0 + options.slack) * best.inner_max,
                   (1.0 + options.slack) * best.outer_max);
  if (!verify_lmi(a, b, params).passed) {
    throw SynthesisFailure("synthesize_lmi: search point does not verify");
  }
  return params;
}

}  // namespace ofts
