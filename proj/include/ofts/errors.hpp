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

#include <stdexcept>
#include <string>

// Argument and domain violations are reported with std::invalid_argument and
// std::domain_error. The types below cover numerical outcomes that callers
// commonly want to catch separately.
namespace ofts {

/// An iterative method stopped without meeting its tolerance.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bisection on an implicit Lyapunov function ran out of iterations.
/// Carries the last bracket so callers can inspect how close it got.
class IlfSolveError : public NumericalFailure {
 public:
  IlfSolveError(const std::string& what, double lower, double upper)
      : NumericalFailure(what), lower_(lower), upper_(upper) {}

  double lower() const { return lower_; }
  double upper() const { return upper_; }

 private:
  double lower_;
  double upper_;
};

/// A simulated state became non-finite.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}

  /// Simulated time at which the first non-finite value appeared.
  double time() const { return time_; }

 private:
  double time_;
};

/// Randomized LMI search found no strictly feasible point within budget.
class SynthesisFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rate parameters admit no positive threshold.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ofts
