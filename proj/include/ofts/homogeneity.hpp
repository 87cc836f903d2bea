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

// Weighted dilations D_r(lambda) = diag(lambda^r_i), the matching homogeneous
// norm and sample-based homogeneity checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ofts/types.hpp"

namespace ofts {

/// |x|^beta * sign(x), with sign(0) = 0.
template <typename Scalar>
Scalar sign_power(Scalar x, Scalar beta) {
  if (!(beta > Scalar(0))) {
    throw std::invalid_argument("sign_power: exponent must be positive");
  }
  if (x > Scalar(0)) return std::pow(x, beta);
  if (x < Scalar(0)) return -std::pow(-x, beta);
  return Scalar(0);
}

/// sign(x) with sign(0) = 0.
template <typename Scalar>
Scalar sign(Scalar x) {
  return Scalar((Scalar(0) < x) - (x < Scalar(0)));
}

/// Weight vector r and norm exponent rho of an anisotropic dilation.
///
/// Invariants: every weight and rho are strictly positive. When rho is not
/// supplied it defaults to twice the largest weight, which keeps every
/// exponent rho / r_i of the homogeneous norm at least 2.
template <typename Scalar>
class WeightedDilation {
 public:
  using VectorType = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit WeightedDilation(VectorType weights)
      : weights_(std::move(weights)) {
    validate_weights();
    rho_ = Scalar(2) * weights_.maxCoeff();
  }

  WeightedDilation(VectorType weights, Scalar rho)
      : weights_(std::move(weights)), rho_(rho) {
    validate_weights();
    if (!(rho_ > Scalar(0))) {
      throw std::invalid_argument("WeightedDilation: rho must be positive");
    }
  }

  const VectorType& weights() const { return weights_; }
  Scalar rho() const { return rho_; }
  Eigen::Index dim() const { return weights_.size(); }
  Scalar r_min() const { return weights_.minCoeff(); }
  Scalar r_max() const { return weights_.maxCoeff(); }

  /// The diagonal dilation matrix D_r(lambda).
  Eigen::DiagonalMatrix<Scalar, Eigen::Dynamic> matrix(Scalar lambda) const {
    check_lambda(lambda);
    VectorType diag(dim());
    for (Eigen::Index i = 0; i < dim(); ++i) {
      diag(i) = std::pow(lambda, weights_(i));
    }
    return diag.asDiagonal();
  }

  static void check_lambda(Scalar lambda) {
    if (!(lambda > Scalar(0))) {
      throw std::invalid_argument("dilation parameter must be positive");
    }
  }

 private:
  void validate_weights() const {
    if (weights_.size() == 0) {
      throw std::invalid_argument("WeightedDilation: empty weight vector");
    }
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
      if (!(weights_(i) > Scalar(0))) {
        throw std::invalid_argument("WeightedDilation: weights must be positive");
      }
    }
  }

  VectorType weights_;
  Scalar rho_;
};

using Dilation = WeightedDilation<double>;

namespace detail {

template <typename Scalar, typename Derived>
void check_dim(const WeightedDilation<Scalar>& d,
               const Eigen::MatrixBase<Derived>& x) {
  if (x.size() != d.dim()) {
    throw std::invalid_argument("state dimension " + std::to_string(x.size()) +
                                " does not match dilation dimension " +
                                std::to_string(d.dim()));
  }
}

}  // namespace detail

/// D_r(lambda) x.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> dilate(
    const WeightedDilation<Scalar>& d, Scalar lambda,
    const Eigen::MatrixBase<Derived>& x) {
  detail::check_dim(d, x);
  return d.matrix(lambda) * x;
}

/// ||x||_r = (sum_i |x_i|^(rho / r_i))^(1 / rho).
template <typename Scalar, typename Derived>
Scalar homogeneous_norm(const WeightedDilation<Scalar>& d,
                        const Eigen::MatrixBase<Derived>& x) {
  detail::check_dim(d, x);
  Scalar sum(0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Scalar a = std::abs(x(i));
    if (a > Scalar(0)) sum += std::pow(a, d.rho() / d.weights()(i));
  }
  return std::pow(sum, Scalar(1) / d.rho());
}

template <typename Scalar>
struct SpherePoint {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> z;
  Scalar lambda;
};

/// Writes x = D_r(lambda) z with ||z||_r = 1 and lambda = ||x||_r.
template <typename Scalar, typename Derived>
SpherePoint<Scalar> project_to_sphere(const WeightedDilation<Scalar>& d,
                                      const Eigen::MatrixBase<Derived>& x) {
  const Scalar lambda = homogeneous_norm(d, x);
  if (!(lambda > Scalar(0))) {
    throw std::domain_error("project_to_sphere: the origin has no sphere representative");
  }
  return {dilate(d, Scalar(1) / lambda, x), lambda};
}

struct HomogeneityReport {
  double degree_tested = 0.0;
  double max_relative_error = 0.0;
  std::size_t samples_used = 0;
  bool passed = false;
  Vector worst_state;
  double worst_lambda = 1.0;
};

namespace detail {

inline double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::max(1.0, std::abs(reference));
}

inline void check_sample_inputs(std::span<const Vector> samples,
                                std::span<const double> lambdas) {
  if (samples.empty() || lambdas.empty()) {
    throw std::invalid_argument("homogeneity check needs samples and lambdas");
  }
  for (double l : lambdas) Dilation::check_lambda(l);
}

}  // namespace detail

/// Checks f(D_r(lambda) x) = lambda^degree D_r(lambda) f(x) on every
/// (sample, lambda) pair. Error per component is measured relative to
/// max(1, |reference|).
inline HomogeneityReport check_homogeneous_field(
    const VectorField& f, const Dilation& d, double degree,
    std::span<const Vector> samples, std::span<const double> lambdas,
    double tol) {
  detail::check_sample_inputs(samples, lambdas);
  HomogeneityReport report;
  report.degree_tested = degree;
  for (const Vector& x : samples) {
    detail::check_dim(d, x);
    if (x.isZero(0.0)) {
      throw std::invalid_argument("homogeneity samples must be nonzero");
    }
    const Vector fx = f(x);
    for (double lambda : lambdas) {
      const Vector lhs = f(dilate(d, lambda, x));
      const Vector rhs = std::pow(lambda, degree) * dilate(d, lambda, fx);
      for (Eigen::Index i = 0; i < lhs.size(); ++i) {
        const double err = detail::relative_error(lhs(i), rhs(i));
        if (!(err <= report.max_relative_error)) {
          report.max_relative_error = err;
          report.worst_state = x;
          report.worst_lambda = lambda;
        }
      }
      ++report.samples_used;
    }
  }
  report.passed = report.max_relative_error <= tol;
  return report;
}

/// Scalar counterpart: g(D_r(lambda) x) = lambda^degree g(x).
inline HomogeneityReport check_homogeneous_function(
    const ScalarField& g, const Dilation& d, double degree,
    std::span<const Vector> samples, std::span<const double> lambdas,
    double tol) {
  detail::check_sample_inputs(samples, lambdas);
  HomogeneityReport report;
  report.degree_tested = degree;
  for (const Vector& x : samples) {
    detail::check_dim(d, x);
    if (x.isZero(0.0)) {
      throw std::invalid_argument("homogeneity samples must be nonzero");
    }
    const double gx = g(x);
    for (double lambda : lambdas) {
      const double err = detail::relative_error(
          g(dilate(d, lambda, x)), std::pow(lambda, degree) * gx);
      if (!(err <= report.max_relative_error)) {
        report.max_relative_error = err;
        report.worst_state = x;
        report.worst_lambda = lambda;
      }
      ++report.samples_used;
    }
  }
  report.passed = report.max_relative_error <= tol;
  return report;
}

/// Canonical grid (signed unit vectors and the corners of [-1, 1]^n) followed
/// by `random_count` seeded points with components in [-scale, scale].
inline std::vector<Vector> homogeneity_samples(Eigen::Index dim,
                                               std::size_t random_count,
                                               std::uint64_t seed,
                                               double scale = 10.0) {
  std::vector<Vector> out;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (double s : {1.0, -1.0}) {
      Vector e = Vector::Zero(dim);
      e(i) = s;
      out.push_back(e);
    }
  }
  if (dim <= 6) {
    const std::size_t corners = std::size_t{1} << dim;
    for (std::size_t mask = 0; mask < corners; ++mask) {
      Vector c(dim);
      for (Eigen::Index i = 0; i < dim; ++i) c(i) = (mask >> i) & 1U ? -1.0 : 1.0;
      out.push_back(c);
    }
  }
  const std::size_t target = out.size() + random_count;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-scale, scale);
  while (out.size() < target) {
    Vector x(dim);
    for (Eigen::Index i = 0; i < dim; ++i) x(i) = uni(rng);
    if (!x.isZero(0.0)) out.push_back(x);
  }
  return out;
}

/// Dilation factors spanning two decades either side of 1.
inline std::vector<double> default_lambdas() {
  return {0.01, 0.1, 0.5, 2.0, 10.0, 100.0};
}

/// Points on the unit homogeneous sphere. In two dimensions an evenly spaced
/// angular grid is projected; otherwise seeded Gaussian directions are.
inline std::vector<Vector> sphere_samples(const Dilation& d, std::size_t count,
                                          std::uint64_t seed = 7) {
  std::vector<Vector> out;
  out.reserve(count);
  if (d.dim() == 2) {
    for (std::size_t j = 0; j < count; ++j) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) /
                           static_cast<double>(count);
      Vector x(2);
      x << std::cos(angle), std::sin(angle);
      out.push_back(project_to_sphere(d, x).z);
    }
    return out;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  while (out.size() < count) {
    Vector x(d.dim());
    for (Eigen::Index i = 0; i < d.dim(); ++i) x(i) = gauss(rng);
    if (x.norm() > 1e-6) out.push_back(project_to_sphere(d, x).z);
  }
  return out;
}

}  // namespace ofts
