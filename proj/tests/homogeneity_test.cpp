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


#include "ofts/homogeneity.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "ofts/controllers.hpp"

namespace ofts {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

TEST(SignPower, Values) {
  EXPECT_DOUBLE_EQ(sign_power(-4.0, 0.5), -2.0);
  EXPECT_EQ(sign_power(0.0, 0.3), 0.0);
  EXPECT_DOUBLE_EQ(sign_power(9.0, 1.5), 27.0);
  EXPECT_THROW(sign_power(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(sign_power(1.0, -1.0), std::invalid_argument);
}

TEST(SignPower, OddSymmetry) {
  for (double x : {0.1, 1.0, 3.7}) {
    for (double b : {0.2, 1.0, 2.5}) {
      EXPECT_DOUBLE_EQ(sign_power(-x, b), -sign_power(x, b));
    }
  }
}

TEST(Dilation, Examples) {
  EXPECT_TRUE(dilate(Dilation(vec({1, 1})), 1.0, vec({3, -4})).isApprox(vec({3, -4})));
  EXPECT_TRUE(dilate(Dilation(vec({2, 1})), 2.0, vec({1, 1})).isApprox(vec({4, 2})));
  const Vector y = dilate(Dilation(vec({1.5, 1})), 0.5, vec({8, 8}));
  EXPECT_NEAR(y(0), 8.0 * std::pow(0.5, 1.5), 1e-12);
  EXPECT_NEAR(y(1), 4.0, 1e-12);
}

TEST(Dilation, Errors) {
  const Dilation d(vec({1, 1}));
  EXPECT_THROW(dilate(d, 0.0, vec({1, 1})), std::invalid_argument);
  EXPECT_THROW(dilate(d, -1.0, vec({1, 1})), std::invalid_argument);
  EXPECT_THROW(dilate(d, 1.0, vec({1, 1, 1})), std::invalid_argument);
  EXPECT_THROW(Dilation(vec({1, 0})), std::invalid_argument);
  EXPECT_THROW(Dilation{Vector()}, std::invalid_argument);
  EXPECT_THROW(Dilation(vec({1, 1}), 0.0), std::invalid_argument);
}

TEST(Dilation, GroupProperty) {
  const Dilation d(vec({1.5, 1, 0.3}));
  const Vector x = vec({0.7, -2.0, 5.0});
  for (double a : {0.2, 3.0}) {
    for (double b : {0.5, 7.0}) {
      EXPECT_TRUE(dilate(d, a, dilate(d, b, x)).isApprox(dilate(d, a * b, x), 1e-13));
    }
  }
}

TEST(Dilation, DefaultRho) {
  EXPECT_DOUBLE_EQ(Dilation(vec({1.5, 1})).rho(), 3.0);
  EXPECT_DOUBLE_EQ(Dilation(vec({1.5, 1}), 4.0).rho(), 4.0);
}

TEST(HomogeneousNorm, Examples) {
  const Dilation euclid(vec({1, 1}), 2.0);
  EXPECT_NEAR(homogeneous_norm(euclid, vec({1, 1})), std::sqrt(2.0), 1e-14);
  EXPECT_EQ(homogeneous_norm(euclid, vec({0, 0})), 0.0);
  EXPECT_NEAR(homogeneous_norm(Dilation(vec({3, 2}), 6.0), vec({8, 4})),
              std::pow(8.0 * 8.0 + 4.0 * 4.0 * 4.0, 1.0 / 6.0), 1e-12);
  EXPECT_THROW(homogeneous_norm(euclid, vec({1})), std::invalid_argument);
}

TEST(HomogeneousNorm, ScalesLinearlyUnderDilation) {
  const Dilation d(vec({1.5, 1}));
  for (const Vector& x : homogeneity_samples(2, 50, 3)) {
    for (double lambda : default_lambdas()) {
      const double n = homogeneous_norm(d, x);
      EXPECT_NEAR(homogeneous_norm(d, dilate(d, lambda, x)), lambda * n, 1e-12 * lambda * n);
    }
  }
}

TEST(ProjectToSphere, Examples) {
  const Dilation euclid(vec({1, 1}), 2.0);
  auto p = project_to_sphere(euclid, vec({3, 4}));
  EXPECT_NEAR(p.lambda, 5.0, 1e-14);
  EXPECT_TRUE(p.z.isApprox(vec({0.6, 0.8}), 1e-14));
  p = project_to_sphere(euclid, vec({0, 2}));
  EXPECT_NEAR(p.lambda, 2.0, 1e-14);
  EXPECT_TRUE(p.z.isApprox(vec({0, 1}), 1e-14));
  EXPECT_THROW(project_to_sphere(euclid, vec({0, 0})), std::domain_error);
}

// Independent oracle: bisect lambda so that the dilated point has unit norm.
TEST(ProjectToSphere, MatchesBisection) {
  const Dilation d(vec({2, 1}), 2.0);
  const Vector x = vec({4, 0});
  double lo = 1e-6;
  double hi = 1e6;
  for (int i = 0; i < 200; ++i) {
    const double mid = std::sqrt(lo * hi);
    (homogeneous_norm(d, dilate(d, 1.0 / mid, x)) > 1.0 ? lo : hi) = mid;
  }
  const auto p = project_to_sphere(d, x);
  EXPECT_NEAR(p.lambda, 2.0, 1e-12);
  EXPECT_NEAR(p.lambda, lo, 1e-9);
  EXPECT_TRUE(p.z.isApprox(vec({1, 0}), 1e-12));
}

TEST(SphereSamples, LieOnUnitSphere) {
  for (const Dilation& d : {Dilation(vec({1.5, 1})), Dilation(vec({1, 2, 0.5}))}) {
    const auto pts = sphere_samples(d, 64);
    ASSERT_EQ(pts.size(), 64u);
    for (const Vector& z : pts) EXPECT_NEAR(homogeneous_norm(d, z), 1.0, 1e-12);
  }
}

TEST(HomogeneityCheck, DoubleIntegratorClosedLoop) {
  const double alpha = 0.5;
  const Dilation d(vec({2.0 - alpha, 1.0}));
  VectorField f = [alpha](const Vector& x) { return vec({x(1), u_fts(x, alpha)}); };
  const auto samples = homogeneity_samples(2, 100, 11);
  const auto lambdas = default_lambdas();
  const auto rep = check_homogeneous_field(f, d, alpha - 1.0, samples, lambdas, 1e-9);
  EXPECT_TRUE(rep.passed) << rep.max_relative_error;
  EXPECT_EQ(rep.samples_used, samples.size() * lambdas.size());
  EXPECT_FALSE(check_homogeneous_field(f, d, 0.0, samples, lambdas, 1e-9).passed);
}

TEST(HomogeneityCheck, LinearField) {
  Matrix a(2, 2);
  a << 0, 1, -2, -3;
  VectorField f = [a](const Vector& x) { return Vector(a * x); };
  const auto samples = homogeneity_samples(2, 20, 5);
  const auto lambdas = default_lambdas();
  EXPECT_TRUE(check_homogeneous_field(f, Dilation(vec({1, 1})), 0.0, samples, lambdas, 1e-12)
                  .passed);
}

TEST(HomogeneityCheck, SignField) {
  VectorField f = [](const Vector& x) { return vec({x(1), -sign(x(0))}); };
  const auto samples = homogeneity_samples(2, 20, 5);
  const auto lambdas = default_lambdas();
  EXPECT_TRUE(check_homogeneous_field(f, Dilation(vec({2, 1})), -1.0, samples, lambdas, 1e-12)
                  .passed);
}

TEST(HomogeneityCheck, Function) {
  const Dilation d(vec({1.5, 1}));
  ScalarField g = [](const Vector& x) {
    return std::pow(std::abs(x(0)), 2.0) + std::pow(std::abs(x(1)), 3.0);
  };
  const auto samples = homogeneity_samples(2, 20, 9);
  const auto lambdas = default_lambdas();
  EXPECT_TRUE(check_homogeneous_function(g, d, 3.0, samples, lambdas, 1e-10).passed);
  EXPECT_FALSE(check_homogeneous_function(g, d, 2.0, samples, lambdas, 1e-10).passed);
}

TEST(HomogeneityCheck, Errors) {
  const Dilation d(vec({1, 1}));
  VectorField f = [](const Vector& x) { return x; };
  const std::vector<Vector> none;
  const std::vector<double> lambdas{2.0};
  EXPECT_THROW(check_homogeneous_field(f, d, 0.0, none, lambdas, 1e-9), std::invalid_argument);
  const std::vector<Vector> zero{Vector::Zero(2)};
  EXPECT_THROW(check_homogeneous_field(f, d, 0.0, zero, lambdas, 1e-9), std::invalid_argument);
  const std::vector<Vector> ok{vec({1, 1})};
  const std::vector<double> bad{-1.0};
  EXPECT_THROW(check_homogeneous_field(f, d, 0.0, ok, bad, 1e-9), std::invalid_argument);
}

TEST(HomogeneitySamples, Deterministic) {
  const auto a = homogeneity_samples(3, 10, 42);
  const auto b = homogeneity_samples(3, 10, 42);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(a.size(), 6u + 8u + 10u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}

}  // namespace
}  // namespace ofts
