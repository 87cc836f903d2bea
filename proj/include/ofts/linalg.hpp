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

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "ofts/errors.hpp"

namespace ofts {

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
///
/// Sweeps until the off-diagonal Frobenius norm drops below
/// 1e-12 * max(1, ||M||_F). Inputs that are not symmetric to `sym_tol`
/// (relative to the largest entry) are rejected.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> eig_sym(
    const Eigen::MatrixBase<Derived>& m, double sym_tol = 1e-10) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  using std::sqrt;
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("eig_sym: matrix must be square");
  }
  const Eigen::Index n = m.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a = m;
  const Scalar scale = std::max<Scalar>(Scalar(1), a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > sym_tol * scale) {
    throw std::invalid_argument("eig_sym: matrix is not symmetric");
  }
  a = Scalar(0.5) * (a + a.transpose()).eval();

  const Scalar tol = Scalar(1e-12) * std::max<Scalar>(Scalar(1), a.norm());
  auto off_norm = [&]() {
    Scalar s(0);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps && off_norm() > tol; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        const Scalar t = (theta >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                         (abs(theta) + sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        for (Eigen::Index r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const Scalar arp = a(r, p);
          const Scalar arq = a(r, q);
          a(r, p) = a(p, r) = c * arp - s * arq;
          a(r, q) = a(q, r) = s * arp + c * arq;
        }
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = Scalar(0);
      }
    }
  }
  if (sweep == kMaxSweeps && off_norm() > tol) {
    throw NumericalFailure("eig_sym: Jacobi sweeps did not converge");
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values = a.diagonal();
  std::sort(values.data(), values.data() + n);
  return values;
}

/// Rank by Gaussian elimination with full pivoting on the matrix scaled to
/// unit max entry; pivots at or below `tol` count as zero.
template <typename Derived>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Derived>& m,
                            double tol = 1e-10) {
  Eigen::MatrixXd a = m.template cast<double>();
  const double scale = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
  if (scale == 0.0) return 0;
  a /= scale;
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  Eigen::Index rank = 0;
  for (; rank < std::min(rows, cols); ++rank) {
    Eigen::Index pr = 0;
    Eigen::Index pc = 0;
    const double pivot =
        a.bottomRightCorner(rows - rank, cols - rank).cwiseAbs().maxCoeff(&pr, &pc);
    if (pivot <= tol) break;
    a.row(rank).swap(a.row(rank + pr));
    a.col(rank).swap(a.col(rank + pc));
    for (Eigen::Index i = rank + 1; i < rows; ++i) {
      const double factor = a(i, rank) / a(rank, rank);
      a.row(i).tail(cols - rank) -= factor * a.row(rank).tail(cols - rank);
    }
  }
  return rank;
}

/// [B, AB, ..., A^(n-1) B].
inline Eigen::MatrixXd controllability_matrix(const Eigen::MatrixXd& a,
                                              const Eigen::MatrixXd& b) {
  if (a.rows() != a.cols() || b.rows() != a.rows()) {
    throw std::invalid_argument("controllability_matrix: dimension mismatch");
  }
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd c(n, n * b.cols());
  Eigen::MatrixXd block = b;
  for (Eigen::Index i = 0; i < n; ++i) {
    c.middleCols(i * b.cols(), b.cols()) = block;
    block = a * block;
  }
  return c;
}

inline bool is_controllable(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return numerical_rank(controllability_matrix(a, b)) == a.rows();
}

}  // namespace ofts
