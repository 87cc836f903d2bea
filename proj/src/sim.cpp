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

#include "ofts/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ofts/errors.hpp"

namespace ofts {
namespace {

Vector rk4_step(const SystemModel& sys, const Vector& x, double h) {
  const Vector k1 = sys.rhs(x);
  const Vector k2 = sys.rhs(x + 0.5 * h * k1);
  const Vector k3 = sys.rhs(x + 0.5 * h * k2);
  const Vector k4 = sys.rhs(x + h * k3);
  return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void clamp_origin(const SystemModel& sys, double eps, Vector& x) {
  const Eigen::Index k = sys.absorbing_dims();
  if (k > 0 && x.head(k).norm() <= eps) x.head(k).setZero();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "rk4") return Method::kRk4;
  if (name == "euler") return Method::kEuler;
  throw std::invalid_argument("unknown integration method '" + name + "'");
}

std::string to_string(Method m) { return m == Method::kRk4 ? "rk4" : "euler"; }

void IntegratorConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("IntegratorConfig: dt must be positive");
  if (!(horizon > dt)) throw std::invalid_argument("IntegratorConfig: dt must be below the horizon");
  if (!(origin_stop_eps >= 0.0)) {
    throw std::invalid_argument("IntegratorConfig: origin_stop_eps must be nonnegative");
  }
  if (record_every < 1) throw std::invalid_argument("IntegratorConfig: record_every must be >= 1");
}

Vector Trajectory::output_norms() const {
  Vector out(outputs.cols());
  for (Eigen::Index i = 0; i < outputs.cols(); ++i) out(i) = outputs.col(i).norm();
  return out;
}

Trajectory integrate(const SystemModel& sys, const Vector& x0, const IntegratorConfig& cfg) {
  cfg.validate();
  if (x0.size() != sys.state_dim()) {
    throw std::invalid_argument("integrate: initial state has dimension " +
                                std::to_string(x0.size()) + ", system has " +
                                std::to_string(sys.state_dim()));
  }
  if (!x0.allFinite()) throw std::invalid_argument("integrate: initial state is not finite");

  auto steps = static_cast<long long>(std::ceil(cfg.horizon / cfg.dt - 1e-9));
  steps = std::max(steps, 1LL);
  const long long kept = (steps - 1) / cfg.record_every + 2;  // includes t = 0 and the end

  Trajectory traj;
  traj.state_labels = sys.state_labels();
  traj.times.resize(kept);
  traj.states.resize(sys.state_dim(), kept);
  traj.outputs.resize(sys.output_dim(), kept);
  if (sys.has_control()) traj.controls.resize(kept);

  Eigen::Index col = 0;
  auto record = [&](double t, const Vector& x) {
    traj.times(col) = t;
    traj.states.col(col) = x;
    traj.outputs.col(col) = sys.output(x);
    if (sys.has_control()) traj.controls(col) = sys.control(x);
    ++col;
  };

  Vector x = x0;
  clamp_origin(sys, cfg.origin_stop_eps, x);
  record(0.0, x);
  for (long long i = 1; i <= steps; ++i) {
    const double t_prev = static_cast<double>(i - 1) * cfg.dt;
    const double t = (i == steps) ? cfg.horizon : static_cast<double>(i) * cfg.dt;
    const double h = t - t_prev;
    x = cfg.method == Method::kRk4 ? rk4_step(sys, x, h) : Vector(x + h * sys.rhs(x));
    if (!x.allFinite()) {
      std::ostringstream msg;
      msg << sys.name() << ": state became non-finite at t = " << t;
      throw DivergenceError(msg.str(), t);
    }
    clamp_origin(sys, cfg.origin_stop_eps, x);
    if (i % cfg.record_every == 0 || i == steps) record(t, x);
  }
  traj.times.conservativeResize(col);
  traj.states.conservativeResize(Eigen::NoChange, col);
  traj.outputs.conservativeResize(Eigen::NoChange, col);
  if (sys.has_control()) traj.controls.conservativeResize(col);
  return traj;
}

SettlingEstimate detect_settling(const Trajectory& traj, double eps, double dwell) {
  if (!(eps > 0.0) || !(dwell > 0.0)) {
    throw std::invalid_argument("detect_settling: eps and dwell must be positive");
  }
  if (traj.size() == 0) throw std::invalid_argument("detect_settling: empty trajectory");
  const double horizon = traj.times(traj.size() - 1);
  if (!(dwell < horizon)) throw std::invalid_argument("detect_settling: dwell must be below the horizon");

  SettlingEstimate est;
  est.eps = eps;
  est.dwell = dwell;
  const Vector norms = traj.output_norms();
  Eigen::Index first = 0;
  for (Eigen::Index i = norms.size(); i-- > 0;) {
    if (norms(i) > eps) {
      first = i + 1;
      break;
    }
  }
  if (first == norms.size()) return est;
  est.t_settle = traj.times(first);
  est.settled = *est.t_settle <= horizon - dwell;
  return est;
}

std::vector<SettlingEstimate> batch_settling(const SystemFactory& factory,
                                             const std::vector<Vector>& initial_states,
                                             const IntegratorConfig& cfg, double eps,
                                             double dwell) {
  if (initial_states.empty()) throw std::invalid_argument("batch_settling: no initial states");
  if (!factory) throw std::invalid_argument("batch_settling: factory required");
  cfg.validate();

  auto run = [&factory, &cfg, eps, dwell](const Vector& x0) {
    SettlingEstimate est;
    est.eps = eps;
    est.dwell = dwell;
    try {
      est = detect_settling(integrate(factory(), x0, cfg), eps, dwell);
    } catch (const DivergenceError& e) {
      est.error = e.what();
      est.divergence_time = e.time();
    } catch (const std::exception& e) {
      est.error = e.what();
    }
    return est;
  };

  const std::size_t workers =
      std::max<std::size_t>(1, std::thread::hardware_concurrency());
  std::vector<SettlingEstimate> out(initial_states.size());
  for (std::size_t start = 0; start < initial_states.size(); start += workers) {
    const std::size_t stop = std::min(initial_states.size(), start + workers);
    std::vector<std::future<SettlingEstimate>> jobs;
    for (std::size_t i = start; i < stop; ++i) {
      jobs.push_back(std::async(std::launch::async, run, std::cref(initial_states[i])));
    }
    for (std::size_t i = start; i < stop; ++i) out[i] = jobs[i - start].get();
  }
  return out;
}

void write_csv(std::ostream& out, const Trajectory& traj) {
  out << "t";
  for (const auto& label : traj.state_labels) out << ',' << label;
  for (Eigen::Index j = 0; j < traj.outputs.rows(); ++j) out << ",y" << j + 1;
  if (traj.has_controls()) out << ",u";
  out << '\n';
  for (Eigen::Index i = 0; i < traj.size(); ++i) {
    out << format_double(traj.times(i));
    for (Eigen::Index j = 0; j < traj.states.rows(); ++j) {
      out << ',' << format_double(traj.states(j, i));
    }
    for (Eigen::Index j = 0; j < traj.outputs.rows(); ++j) {
      out << ',' << format_double(traj.outputs(j, i));
    }
    if (traj.has_controls()) out << ',' << format_double(traj.controls(i));
    out << '\n';
  }
}

}  // namespace ofts
