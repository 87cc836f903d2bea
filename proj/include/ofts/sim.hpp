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

// Fixed-step integration of closed loops whose right-hand sides are only
// continuous at the origin, plus settling-time detection on the output.

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ofts/dynamics.hpp"
#include "ofts/types.hpp"

namespace ofts {

enum class Method { kRk4, kEuler };

/// Parses "rk4" or "euler".
Method parse_method(const std::string& name);
std::string to_string(Method m);

struct IntegratorConfig {
  double dt = 1e-4;
  double horizon = 10.0;
  Method method = Method::kRk4;
  /// Once the absorbing components of the state have norm at most this, they
  /// are set to exactly zero. Without it a non-Lipschitz field chatters at
  /// step scale around its zero set instead of staying there.
  double origin_stop_eps = 1e-9;
  /// Keep every k-th step; the final step is always kept.
  int record_every = 1;

  void validate() const;
};

/// Samples of one solution. Column i of `states`, `outputs` belongs to
/// times(i); `controls` is empty when the model has no control attached.
struct Trajectory {
  Vector times;
  Matrix states;
  Matrix outputs;
  Vector controls;
  std::vector<std::string> state_labels;

  Eigen::Index size() const { return times.size(); }
  bool has_controls() const { return controls.size() > 0; }
  Vector state(Eigen::Index i) const { return states.col(i); }
  Vector final_state() const { return states.col(states.cols() - 1); }
  /// Euclidean norm of every output sample.
  Vector output_norms() const;
};

/// Integrates `sys` from x0 over [0, horizon]. Throws DivergenceError with the
/// time of the step that produced a non-finite state.
Trajectory integrate(const SystemModel& sys, const Vector& x0, const IntegratorConfig& cfg);

struct SettlingEstimate {
  bool settled = false;
  std::optional<double> t_settle;  // absent when the last sample exceeds eps
  double eps = 0.0;
  double dwell = 0.0;
  /// Set when the run failed; the estimate is then unsettled.
  std::optional<std::string> error;
  std::optional<double> divergence_time;
};

/// t_settle is the first sample time after which every remaining output
/// sample has norm <= eps. The run counts as settled only when that leaves at
/// least `dwell` seconds of confirmation before the horizon.
SettlingEstimate detect_settling(const Trajectory& traj, double eps, double dwell);

using SystemFactory = std::function<SystemModel()>;

/// One estimate per initial state, in input order. Runs execute concurrently;
/// a divergence or solver failure is recorded in that run's estimate and does
/// not stop the others.
std::vector<SettlingEstimate> batch_settling(const SystemFactory& factory,
                                             const std::vector<Vector>& initial_states,
                                             const IntegratorConfig& cfg, double eps,
                                             double dwell);

/// CSV with columns t, state labels, y1..yp and u (when recorded). Values are
/// written with 17 significant digits so output is reproducible byte for byte.
void write_csv(std::ostream& out, const Trajectory& traj);

}  // namespace ofts
