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

// Fixed-time feedback built on an implicit Lyapunov function.
//
// V(x) is the root of Q(V, x) = x^T D_r(1/V) X^-1 D_r(1/V) x - 1, using the
// weights r1 inside the ellipsoid x^T X^-1 x < 1 and r2 outside it. Inside,
// the closed loop is homogeneous of negative degree nu1; outside, of positive
// degree nu2, which makes the settling time uniform in the initial state.

#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>

#include "ofts/controllers.hpp"
#include "ofts/types.hpp"

namespace ofts {

struct ILFSolveConfig {
  double tol = 1e-10;           // |Q| at the returned root
  double v_min = 1e-12;         // lower end of the inner bracket
  int max_iter = 200;
  double bracket_growth = 4.0;  // outer bracket expansion factor

  void validate() const;
};

enum class IlfBranch { kInner, kOuter };

/// Gains and weights of the implicit-Lyapunov fixed-time controller.
///
/// Construction checks that X is symmetric positive definite, that the
/// degrees are in range and caches k = Y X^-1 and X^-1. The matrix
/// inequalities depend on (A, B) and are checked by verify_lmi.
class ILFParams {
 public:
  ILFParams(Matrix x, RowVector y, double nu1, double nu2, Vector r1, Vector r2,
            double zeta1, double zeta2, double zeta3);

  const Matrix& X() const { return x_; }
  const Matrix& X_inv() const { return x_inv_; }
  const RowVector& Y() const { return y_; }
  const RowVector& k() const { return k_; }
  double nu1() const { return nu1_; }
  double nu2() const { return nu2_; }
  const Vector& r1() const { return r1_; }
  const Vector& r2() const { return r2_; }
  double zeta1() const { return zeta1_; }
  double zeta2() const { return zeta2_; }
  double zeta3() const { return zeta3_; }
  Eigen::Index dim() const { return x_.rows(); }

  const Vector& weights(IlfBranch b) const { return b == IlfBranch::kInner ? r1_ : r2_; }
  double degree(IlfBranch b) const { return b == IlfBranch::kInner ? nu1_ : nu2_; }
  /// Exponent of V in the control: last weight plus the branch degree,
  /// i.e. 1 + nu1 inside and 1 + 2 nu2 outside for the planar weights.
  double control_exponent(IlfBranch b) const;

  /// x^T X^-1 x.
  double level(const Vector& x) const;
  /// Inner when x^T X^-1 x < 1.
  IlfBranch region(const Vector& x) const;

 private:
  Matrix x_;
  Matrix x_inv_;
  RowVector y_;
  RowVector k_;
  double nu1_;
  double nu2_;
  Vector r1_;
  Vector r2_;
  double zeta1_;
  double zeta2_;
  double zeta3_;
};

/// Planar weights (1 - nu1, 1) and (1, 1 + nu2).
std::pair<Vector, Vector> planar_ilf_weights(double nu1, double nu2);

/// Q(V, x) with the dilation D_r(1/V) and the given X.
double q_function(double v, const Vector& x, const Matrix& X, const Vector& r);

/// Same, using the cached inverse and the weights of `branch`.
double q_function(double v, const Vector& x, const ILFParams& params,
                  IlfBranch branch);

struct IlfSolution {
  double v = 0.0;
  IlfBranch branch = IlfBranch::kInner;
  int iterations = 0;
};

/// Root of the region-appropriate Q by bisection in log V. Throws
/// std::domain_error at x = 0 and IlfSolveError when max_iter is exhausted.
IlfSolution solve_ilf_detailed(const Vector& x, const ILFParams& params,
                               const ILFSolveConfig& cfg = {});
double solve_ilf(const Vector& x, const ILFParams& params,
                 const ILFSolveConfig& cfg = {});

/// dV/dx = -(dQ/dV)^-1 dQ/dx on the level set Q(V, x) = 0 of `branch`.
RowVector ilf_gradient(const Vector& x, double v, const ILFParams& params,
                       IlfBranch branch);

/// Branch to differentiate on the switching surface: the region the state
/// moves into according to d/dt (x^T X^-1 x), inner on ties.
IlfBranch surface_branch(const Vector& x, const Vector& xdot, const ILFParams& params);

/// V^(1+nu1) k D_r1(1/V) x inside, V^(1+2 nu2) k D_r2(1/V) x outside, 0 at 0.
double u_fxts(const Vector& x, const ILFParams& params, const ILFSolveConfig& cfg = {});

/// The fixed-time law with V and its gradient for plant (A, B). States within
/// `surface_tol` of the switching surface pick the gradient branch from the
/// nominal closed-loop velocity (A + B k) x.
NominalLaw fixed_time_law(const Matrix& a, const Vector& b, const ILFParams& params,
                          const ILFSolveConfig& cfg = {}, double surface_tol = 1e-12);

/// Eigenvalue margins of the three matrix inequalities.
///
/// decay: -max eig(A X + X A^T + B Y + Y^T B^T + zeta1 X), must be > 0.
/// For each weight vector r with H = diag(r) and M = X H + H X:
///   upper: min eig(zeta X - M), must be >= 0 (to round-off),
///   lower: min eig(M), must be > 0.
struct LmiReport {
  double x_min_eig = 0.0;
  double decay = 0.0;
  double inner_upper = 0.0;
  double inner_lower = 0.0;
  double outer_upper = 0.0;
  double outer_lower = 0.0;
  bool passed = false;

  double inner_margin() const { return std::min(inner_upper, inner_lower); }
  double outer_margin() const { return std::min(outer_upper, outer_lower); }
};

LmiReport verify_lmi(const Matrix& a, const Vector& b, const ILFParams& params);

struct SynthesisOptions {
  int budget = 4000;           // objective evaluations
  double y_bound = 10.0;       // box on Y with trace(X) = 1
  double max_condition = 50.0; // soft cap on cond(X)
  double slack = 0.05;         // relative slack on zeta2, zeta3
};

/// Randomized coordinate search for X > 0 and Y maximizing the smallest
/// normalized margin. Deterministic for a given seed. Throws SynthesisFailure
/// when (A, B) is uncontrollable or no strictly feasible point is found.
ILFParams synthesize_lmi(const Matrix& a, const Vector& b, const Vector& r1,
                         const Vector& r2, double nu1, double nu2,
                         std::uint64_t seed, const SynthesisOptions& options = {});

/// JSON document with X and Y as row arrays, degrees, weights and rates.
std::string ilf_params_to_json(const ILFParams& params);
/// Throws std::invalid_argument naming the offending key.
ILFParams ilf_params_from_json(const std::string& text);

}  // namespace ofts
