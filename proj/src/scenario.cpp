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

#include "ofts/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "ofts/controllers.hpp"
#include "ofts/dynamics.hpp"
#include "ofts/errors.hpp"
#include "ofts/ilf.hpp"

namespace ofts {
namespace {

using nlohmann::json;

struct Builtin {
  const char* name;
  const char* description;
  const char* json;
};

// Horizons and steps are chosen so every scenario runs in seconds.
const Builtin kBuiltins[] = {
    {"example1", "output finite-time system with an unobserved state, V = U + W",
     R"({
  "schema_version": 1, "name": "example1",
  "system": {"builtin": "example1"},
  "integrator": {"dt": 1e-4, "horizon": 10, "record_every": 10},
  "initial_states": [[1, 1], [-1, 0.5], [0.5, -2]],
  "settling": {"eps": 1e-3, "dwell": 1},
  "certify": true
})"},
    {"example2", "output fixed-time system with a bounded unobserved part",
     R"({
  "schema_version": 1, "name": "example2",
  "system": {"builtin": "example2"},
  "integrator": {"dt": 1e-4, "horizon": 10, "record_every": 10},
  "initial_states": [[1, 1], [-2, 0.5], [0.5, 2], [10, 0]],
  "settling": {"eps": 1e-3, "dwell": 1},
  "certify": true
})"},
    {"example3", "adaptive finite-time control of a double integrator, theta = (3, -2)",
     R"({
  "schema_version": 1, "name": "example3",
  "system": {"plant": "example3-plant", "theta": [3, -2]},
  "controller": {"type": "adaptive-finite-time", "alpha": 0.5, "l": 1, "s": 1,
                 "gamma": 1, "audit": false},
  "integrator": {"dt": 1e-4, "horizon": 20, "record_every": 10},
  "initial_states": [[1, 1], [-2, 1], [3, -3]],
  "settling": {"eps": 1e-3, "dwell": 1}
})"},
    {"example3-noadapt", "the example3 plant under the finite-time law alone",
     R"({
  "schema_version": 1, "name": "example3-noadapt",
  "system": {"plant": "example3-plant", "theta": [3, -2]},
  "controller": {"type": "finite-time", "alpha": 0.5, "l": 1, "s": 1, "audit": false},
  "integrator": {"dt": 1e-4, "horizon": 20, "record_every": 10},
  "initial_states": [[1, 1]],
  "settling": {"eps": 1e-3, "dwell": 1}
})"},
    {"example4", "adaptive fixed-time control from an implicit Lyapunov function, theta = (3, 2)",
     R"({
  "schema_version": 1, "name": "example4",
  "system": {"plant": "example4-plant", "theta": [3, 2]},
  "controller": {"type": "adaptive-fixed-time", "nu1": -0.5, "nu2": 0.5,
                 "theta_max": 5, "gamma": 1, "seed": 1},
  "integrator": {"dt": 1e-4, "horizon": 8, "record_every": 10},
  "initial_states": [[0, 1], [0, 10], [0, 100]],
  "settling": {"eps": 1e-2, "dwell": 1}
})"},
    {"example4-nominal", "the implicit-Lyapunov fixed-time law on the certain double integrator",
     R"({
  "schema_version": 1, "name": "example4-nominal",
  "system": {"plant": "example4-plant"},
  "controller": {"type": "fixed-time", "uncertainty": false, "nu1": -0.5, "nu2": 0.5, "seed": 1},
  "integrator": {"dt": 1e-4, "horizon": 8, "record_every": 10},
  "initial_states": [[0, 1], [0, 10], [0, 100], [0, 1000]],
  "settling": {"eps": 1e-2, "dwell": 1}
})"},
    {"comparison-finite-time", "V' = -V^0.5 from V0 = 1; settles at t = 2",
     R"({
  "schema_version": 1, "name": "comparison-finite-time",
  "system": {"comparison": {"c": 1, "mu": 0.5}},
  "integrator": {"dt": 1e-4, "horizon": 3, "record_every": 10},
  "initial_states": [[1]],
  "settling": {"eps": 1e-12, "dwell": 0.5}
})"},
    {"comparison-fixed-time-attraction", "V' = -V^2 reaches V = 1 before t = 1 from any V0",
     R"({
  "schema_version": 1, "name": "comparison-fixed-time-attraction",
  "system": {"comparison": {"c": 1, "mu": 2}},
  "integrator": {"dt": 1e-6, "horizon": 1.5, "record_every": 1000},
  "initial_states": [[1e3], [1e6]],
  "settling": {"eps": 1, "dwell": 0.25}
})"},
    {"comparison-fixed-time", "V' = -V^0.5 - V^2 settles before t = 3 from any V0",
     R"({
  "schema_version": 1, "name": "comparison-fixed-time",
  "system": {"comparison": {"k1": 1, "mu": 0.5, "k2": 1, "nu": 2}},
  "integrator": {"dt": 1e-6, "horizon": 3.5, "record_every": 1000},
  "initial_states": [[1], [1e3], [1e6]],
  "settling": {"eps": 1e-12, "dwell": 0.25}
})"},
};

// ---- parsing ---------------------------------------------------------------

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ScenarioError("scenario: key '" + key + "' " + what);
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& obj, const char* key, const std::string& path, double fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) fail(path + key, "must be a number");
  return v->get<double>();
}

bool get_bool(const json& obj, const char* key, const std::string& path, bool fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean()) fail(path + key, "must be true or false");
  return v->get<bool>();
}

std::string get_string(const json& obj, const char* key, const std::string& path,
                       const std::string& fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) fail(path + key, "must be a string");
  return v->get<std::string>();
}

Vector get_vector(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "must be a non-empty array of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(path, "must contain only numbers");
    out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
  }
  return out;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return it.key() == k; });
    if (!known) fail(path + it.key(), "is not recognized");
  }
}

SystemSpec parse_system(const json& j) {
  if (!j.is_object()) fail("system", "must be an object");
  SystemSpec s;
  if (const json* b = find(j, "builtin")) {
    check_keys(j, "system.", {"builtin"});
    if (!b->is_string()) fail("system.builtin", "must be a string");
    s.kind = SystemSpec::Kind::kBuiltin;
    s.name = b->get<std::string>();
    if (s.name != "example1" && s.name != "example2") {
      fail("system.builtin", "names an unknown system '" + s.name + "'");
    }
    return s;
  }
  if (const json* p = find(j, "plant")) {
    check_keys(j, "system.", {"plant", "theta"});
    if (!p->is_string()) fail("system.plant", "must be a string");
    s.kind = SystemSpec::Kind::kPlant;
    s.name = p->get<std::string>();
    if (s.name != "example3-plant" && s.name != "example4-plant") {
      fail("system.plant", "names an unknown plant '" + s.name + "'");
    }
    if (const json* t = find(j, "theta")) {
      s.theta = get_vector(*t, "system.theta");
      if (s.theta->size() != 2) fail("system.theta", "must have two entries");
    }
    return s;
  }
  if (const json* c = find(j, "comparison")) {
    check_keys(j, "system.", {"comparison"});
    if (!c->is_object()) fail("system.comparison", "must be an object");
    s.kind = SystemSpec::Kind::kComparison;
    const std::string path = "system.comparison.";
    if (find(*c, "k1")) {
      check_keys(*c, path, {"k1", "mu", "k2", "nu"});
      s.two_rate = true;
      s.c = get_number(*c, "k1", path, 0.0);
      s.mu = get_number(*c, "mu", path, 0.0);
      s.k2 = get_number(*c, "k2", path, 0.0);
      s.nu = get_number(*c, "nu", path, 0.0);
      if (!(s.c > 0 && s.k2 > 0)) fail(path + "k1", "and k2 must be positive");
      if (!(s.mu > 0 && s.mu < 1)) fail(path + "mu", "must lie in (0, 1)");
      if (!(s.nu > 1)) fail(path + "nu", "must exceed 1");
    } else {
      check_keys(*c, path, {"c", "mu"});
      s.c = get_number(*c, "c", path, 0.0);
      s.mu = get_number(*c, "mu", path, 0.0);
      if (!(s.c > 0)) fail(path + "c", "must be positive");
      if (!(s.mu > 0 && s.mu != 1)) fail(path + "mu", "must be positive and differ from 1");
    }
    return s;
  }
  fail("system", "needs one of 'builtin', 'plant' or 'comparison'");
}

ControllerSpec parse_controller(const json& j) {
  if (!j.is_object()) fail("controller", "must be an object");
  check_keys(j, "controller.", {"type", "uncertainty", "alpha", "l", "s", "gamma", "audit",
                                "nu1", "nu2", "theta_max", "ilf", "seed"});
  const std::string p = "controller.";
  ControllerSpec c;
  c.type = get_string(j, "type", p, "none");
  static const char* kTypes[] = {"none", "finite-time", "adaptive-finite-time", "fixed-time",
                                 "adaptive-fixed-time"};
  if (std::none_of(std::begin(kTypes), std::end(kTypes),
                   [&](const char* t) { return c.type == t; })) {
    fail("controller.type", "names an unknown controller '" + c.type + "'");
  }
  c.uncertainty = get_bool(j, "uncertainty", p, true);
  c.alpha = get_number(j, "alpha", p, c.alpha);
  c.l = get_number(j, "l", p, c.l);
  c.s = get_number(j, "s", p, c.s);
  c.gamma = get_number(j, "gamma", p, c.gamma);
  c.audit = get_bool(j, "audit", p, true);
  c.nu1 = get_number(j, "nu1", p, c.nu1);
  c.nu2 = get_number(j, "nu2", p, c.nu2);
  c.theta_max = get_number(j, "theta_max", p, c.theta_max);
  if (const json* ilf = find(j, "ilf")) {
    if (!ilf->is_object()) fail("controller.ilf", "must be an object");
    c.ilf_json = ilf->dump();
  }
  if (const json* seed = find(j, "seed")) {
    if (!seed->is_number_unsigned()) fail("controller.seed", "must be a nonnegative integer");
    c.seed = seed->get<std::uint64_t>();
  }
  if (!c.uncertainty && (c.type == "adaptive-finite-time" || c.type == "adaptive-fixed-time")) {
    fail("controller.uncertainty", "must be true for adaptive controllers");
  }
  return c;
}

IntegratorConfig parse_integrator(const json& j) {
  if (!j.is_object()) fail("integrator", "must be an object");
  check_keys(j, "integrator.", {"dt", "horizon", "method", "origin_stop_eps", "record_every"});
  const std::string p = "integrator.";
  IntegratorConfig cfg;
  cfg.dt = get_number(j, "dt", p, cfg.dt);
  cfg.horizon = get_number(j, "horizon", p, cfg.horizon);
  try {
    cfg.method = parse_method(get_string(j, "method", p, "rk4"));
  } catch (const std::invalid_argument& e) {
    fail("integrator.method", "must be 'rk4' or 'euler'");
  }
  cfg.origin_stop_eps = get_number(j, "origin_stop_eps", p, cfg.origin_stop_eps);
  if (const json* r = find(j, "record_every")) {
    if (!r->is_number_integer() || r->get<long long>() < 1) {
      fail("integrator.record_every", "must be a positive integer");
    }
    cfg.record_every = r->get<int>();
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("scenario: integrator: ") + e.what());
  }
  return cfg;
}

Eigen::Index state_dim(const SystemSpec& s) {
  return s.kind == SystemSpec::Kind::kComparison ? 1 : 2;
}

// ---- model construction ----------------------------------------------------

struct BuiltModel {
  SystemFactory factory;
  bool adaptive = false;
  Eigen::Index plant_dim = 0;
  std::function<Vector(const Vector& omega)> estimate;  // omega -> theta_hat
  std::function<double(const Vector& xt0)> estimate_cap;
  std::function<std::optional<double>(const Vector& x0)> reference_bound;
};

ILFParams ilf_for(const ControllerSpec& c, const UncertainPlant& plant) {
  if (c.ilf_json) {
    std::optional<ILFParams> p;
    try {
      p.emplace(ilf_params_from_json(*c.ilf_json));
    } catch (const std::invalid_argument& e) {
      fail("controller.ilf", e.what());
    }
    if (p->dim() != plant.state_dim()) fail("controller.ilf", "does not match the plant size");
    const LmiReport rep = verify_lmi(plant.A(), plant.B(), *p);
    if (!rep.passed) {
      std::ostringstream msg;
      msg << "does not satisfy the matrix inequalities (decay margin " << rep.decay
          << ", inner " << rep.inner_margin() << ", outer " << rep.outer_margin() << ")";
      fail("controller.ilf", msg.str());
    }
    return *p;
  }
  const auto [r1, r2] = planar_ilf_weights(c.nu1, c.nu2);
  return synthesize_lmi(plant.A(), plant.B(), r1, r2, c.nu1, c.nu2, c.seed);
}

BuiltModel build_model(const Scenario& sc) {
  BuiltModel m;
  const SystemSpec& sys = sc.system;
  const ControllerSpec& ctl = sc.controller;

  if (sys.kind == SystemSpec::Kind::kComparison) {
    if (ctl.type != "none") fail("controller.type", "must be 'none' for comparison systems");
    const SystemModel model = sys.two_rate ? comparison_system(sys.c, sys.mu, sys.k2, sys.nu)
                                           : comparison_system(sys.c, sys.mu);
    m.factory = [model] { return model; };
    const double eps = sc.settle_eps;
    m.reference_bound = [sys, eps](const Vector& x0) -> std::optional<double> {
      if (sys.two_rate) return fixed_time_settling_bound(sys.c, sys.mu, sys.k2, sys.nu);
      if (sys.mu < 1.0) return finite_time_settling_bound(std::abs(x0(0)), sys.c, sys.mu);
      return fixed_time_attraction_bound(sys.c, sys.mu, eps);
    };
    return m;
  }
  if (sys.kind == SystemSpec::Kind::kBuiltin) {
    if (ctl.type != "none") fail("controller.type", "must be 'none' for autonomous systems");
    const SystemModel model = builtin_system(sys.name);
    m.factory = [model] { return model; };
    return m;
  }

  const UncertainPlant plant = builtin_plant(sys.name, sys.theta);
  m.plant_dim = plant.state_dim();
  if (ctl.type == "none") fail("controller.type", "a plant needs a controller");

  if (ctl.type == "finite-time" || ctl.type == "adaptive-finite-time") {
    const FTControllerParams p = ctl.audit
                                     ? FTControllerParams(ctl.alpha, ctl.l, ctl.s, ctl.gamma)
                                     : FTControllerParams::unvalidated(ctl.alpha, ctl.l, ctl.s,
                                                                       ctl.gamma);
    if (ctl.type == "adaptive-finite-time") {
      const SystemModel model = adaptive_ft_loop(plant, p);
      m.factory = [model] { return model; };
      m.adaptive = true;
      m.estimate = [](const Vector& omega) { return omega; };
      m.estimate_cap = [plant, p](const Vector& xt0) { return omega_bound_ft(plant, p, xt0); };
    } else if (ctl.uncertainty) {
      const SystemModel model = ft_feedback_loop(plant, p);
      m.factory = [model] { return model; };
    } else {
      const double alpha = p.alpha();
      const SystemModel model = assemble_nominal_loop(
          plant.A(), plant.B(), [alpha](const Vector& x) { return u_fts(x, alpha); },
          plant.name() + "/nominal-finite-time");
      m.factory = [model] { return model; };
    }
    return m;
  }

  const ILFParams params = ilf_for(ctl, plant);
  const NominalLaw law = fixed_time_law(plant.A(), plant.B(), params);
  if (ctl.type == "adaptive-fixed-time") {
    const FxTAdaptiveParams ap(ctl.theta_max, ctl.gamma);
    const SystemModel model = adaptive_fxt_loop(plant, law, ap);
    m.factory = [model] { return model; };
    m.adaptive = true;
    m.estimate = [ap](const Vector& omega) { return theta_hat_fxt(omega, ap); };
    // Each component of theta_max * arctan(omega) stays below theta_max * pi / 2.
    const double cap = ctl.theta_max * std::numbers::pi / 2.0;
    m.estimate_cap = [cap](const Vector&) { return cap; };
  } else if (ctl.uncertainty) {
    const SystemModel model =
        assemble_feedback_loop(plant, [law](const Vector& x) { return law(x).u; });
    m.factory = [model] { return model; };
  } else {
    const SystemModel model = assemble_nominal_loop(
        plant.A(), plant.B(), [law](const Vector& x) { return law(x).u; },
        plant.name() + "/nominal-fixed-time");
    m.factory = [model] { return model; };
  }
  return m;
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void write_estimate_csv(const std::filesystem::path& path, const Trajectory& traj,
                        Eigen::Index plant_dim,
                        const std::function<Vector(const Vector&)>& estimate) {
  std::ofstream out(path);
  out << "t";
  const Eigen::Index q = traj.states.rows() - plant_dim;
  for (Eigen::Index j = 0; j < q; ++j) out << ",theta_hat" << j + 1;
  out << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < traj.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", traj.times(i));
    out << buf;
    const Vector th = estimate(traj.states.col(i).tail(q));
    for (Eigen::Index j = 0; j < q; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", th(j));
      out << ',' << buf;
    }
    out << '\n';
  }
}

json report_json(const CertificationReport& rep) {
  json j;
  j["passed"] = rep.passed;
  j["samples_used"] = rep.samples_used;
  j["samples_excluded"] = rep.samples_excluded;
  j["violating_sample"] = rep.violating_sample ? vector_json(*rep.violating_sample) : json(nullptr);
  json conds = json::array();
  for (const auto& c : rep.conditions) {
    json cj;
    cj["name"] = c.name;
    cj["worst_margin"] = c.worst_margin;
    cj["violations"] = c.violations;
    cj["worst_sample"] = c.worst_sample ? vector_json(*c.worst_sample) : json(nullptr);
    conds.push_back(cj);
  }
  j["conditions"] = conds;
  return j;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ScenarioError("scenario: top level must be an object");
  check_keys(doc, "", {"schema_version", "name", "description", "system", "controller",
                       "integrator", "initial_states", "initial_estimate", "settling",
                       "certify"});
  const json* version = find(doc, "schema_version");
  if (!version || !version->is_number_integer() ||
      version->get<int>() != kScenarioSchemaVersion) {
    fail("schema_version", "must be " + std::to_string(kScenarioSchemaVersion));
  }
  Scenario sc;
  sc.name = get_string(doc, "name", "", "");
  if (sc.name.empty() || sc.name.find_first_of("/\\") != std::string::npos) {
    fail("name", "must be a non-empty string without path separators");
  }
  sc.description = get_string(doc, "description", "", "");
  const json* system = find(doc, "system");
  if (!system) fail("system", "is required");
  sc.system = parse_system(*system);
  if (const json* c = find(doc, "controller")) sc.controller = parse_controller(*c);
  if (const json* i = find(doc, "integrator")) sc.integrator = parse_integrator(*i);

  const json* init = find(doc, "initial_states");
  if (!init || !init->is_array() || init->empty()) {
    fail("initial_states", "must be a non-empty array of states");
  }
  const Eigen::Index n = state_dim(sc.system);
  for (std::size_t i = 0; i < init->size(); ++i) {
    const std::string path = "initial_states[" + std::to_string(i) + "]";
    Vector x = get_vector((*init)[i], path);
    if (x.size() != n) fail(path, "must have " + std::to_string(n) + " entries");
    sc.initial_states.push_back(std::move(x));
  }
  if (const json* est = find(doc, "initial_estimate")) {
    sc.initial_estimate = get_vector(*est, "initial_estimate");
  }
  if (const json* st = find(doc, "settling")) {
    if (!st->is_object()) fail("settling", "must be an object");
    check_keys(*st, "settling.", {"eps", "dwell"});
    sc.settle_eps = get_number(*st, "eps", "settling.", sc.settle_eps);
    sc.dwell = get_number(*st, "dwell", "settling.", sc.dwell);
    if (!(sc.settle_eps > 0)) fail("settling.eps", "must be positive");
    if (!(sc.dwell > 0 && sc.dwell < sc.integrator.horizon)) {
      fail("settling.dwell", "must be positive and below the horizon");
    }
  }
  sc.certify = get_bool(doc, "certify", "", false);
  if (sc.certify && sc.system.kind != SystemSpec::Kind::kBuiltin) {
    fail("certify", "is only available for built-in autonomous systems");
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("scenario: cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::vector<std::pair<std::string, std::string>> list_builtin_scenarios() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& b : kBuiltins) out.emplace_back(b.name, b.description);
  return out;
}

bool is_builtin_scenario(const std::string& name) {
  return std::any_of(std::begin(kBuiltins), std::end(kBuiltins),
                     [&](const Builtin& b) { return name == b.name; });
}

std::string builtin_scenario_json(const std::string& name) {
  for (const auto& b : kBuiltins) {
    if (name == b.name) return b.json;
  }
  throw ScenarioError("unknown built-in scenario '" + name + "'");
}

Scenario builtin_scenario(const std::string& name) {
  Scenario sc = parse_scenario(builtin_scenario_json(name));
  for (const auto& b : kBuiltins) {
    if (name == b.name) sc.description = b.description;
  }
  return sc;
}

void apply_overrides(Scenario& scenario, const RunOverrides& overrides) {
  if (overrides.dt) scenario.integrator.dt = *overrides.dt;
  if (overrides.horizon) scenario.integrator.horizon = *overrides.horizon;
  if (overrides.seed) scenario.controller.seed = *overrides.seed;
  try {
    scenario.integrator.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
  if (!(scenario.dwell < scenario.integrator.horizon)) {
    throw ScenarioError("scenario: settling dwell must be below the horizon");
  }
}

CertificationReport certify_builtin(const std::string& name) {
  const std::vector<Vector> samples =
      halton_box(10000, Eigen::Vector2d(-2.0, -2.0), Eigen::Vector2d(2.0, 2.0));
  if (name == "example1") {
    return check_ofts(example1_system(), example1_candidate(), example1_rates(), samples);
  }
  if (name == "example2") {
    return check_ofxts(example2_system(), example2_candidate(), example2_rates(), samples);
  }
  throw ScenarioError("no certificate is available for '" + name + "'");
}

std::string certification_to_json(const CertificationReport& report) {
  return report_json(report).dump(2);
}

ScenarioResult run_scenario(const Scenario& sc, const std::filesystem::path& out_dir,
                            std::ostream& log) {
  ScenarioResult result;
  json summary;
  summary["schema_version"] = kSummarySchemaVersion;
  summary["scenario"] = sc.name;
  summary["integrator"] = {{"dt", sc.integrator.dt},
                           {"horizon", sc.integrator.horizon},
                           {"method", to_string(sc.integrator.method)},
                           {"origin_stop_eps", sc.integrator.origin_stop_eps},
                           {"record_every", sc.integrator.record_every}};
  summary["settling"] = {{"eps", sc.settle_eps}, {"dwell", sc.dwell}};

  const std::filesystem::path dir = out_dir / sc.name;
  std::filesystem::create_directories(dir);

  BuiltModel model;
  try {
    model = build_model(sc);
  } catch (const SynthesisFailure& e) {
    log << "error: " << e.what() << '\n';
    result.exit_code = kExitInfeasible;
    return result;
  } catch (const Infeasible& e) {
    log << "error: " << e.what() << '\n';
    result.exit_code = kExitInfeasible;
    return result;
  }
  const SystemModel probe = model.factory();

  json runs = json::array();
  for (std::size_t i = 0; i < sc.initial_states.size(); ++i) {
    RunRecord rec;
    rec.x0 = sc.initial_states[i];
    Vector xt0 = rec.x0;
    if (model.adaptive) {
      const Eigen::Index q = probe.state_dim() - model.plant_dim;
      Vector omega0 = Vector::Zero(q);
      if (sc.initial_estimate) {
        if (sc.initial_estimate->size() != q) fail("initial_estimate", "has the wrong size");
        omega0 = *sc.initial_estimate;
      }
      xt0 = ExtendedState{rec.x0, omega0}.stacked();
      rec.estimate_cap = model.estimate_cap(xt0);
    }
    if (model.reference_bound) rec.reference_bound = model.reference_bound(rec.x0);

    json rj;
    rj["index"] = i;
    rj["x0"] = vector_json(rec.x0);
    try {
      const Trajectory traj = integrate(probe, xt0, sc.integrator);
      rec.settling = detect_settling(traj, sc.settle_eps, sc.dwell);
      const auto csv = dir / ("run_" + std::to_string(i) + ".csv");
      std::ofstream out(csv);
      write_csv(out, traj);
      result.files.push_back(csv);
      rj["final_state"] = vector_json(traj.final_state());
      if (model.adaptive) {
        const auto est = dir / ("estimate_" + std::to_string(i) + ".csv");
        write_estimate_csv(est, traj, model.plant_dim, model.estimate);
        result.files.push_back(est);
        double peak = 0.0;
        for (Eigen::Index k = 0; k < traj.size(); ++k) {
          const Vector omega = traj.states.col(k).tail(traj.states.rows() - model.plant_dim);
          peak = std::max(peak, model.estimate(omega).cwiseAbs().maxCoeff());
        }
        rec.max_abs_estimate = peak;
      }
    } catch (const DivergenceError& e) {
      rec.settling.eps = sc.settle_eps;
      rec.settling.dwell = sc.dwell;
      rec.settling.error = e.what();
      rec.settling.divergence_time = e.time();
      result.exit_code = kExitDiverged;
      log << "run " << i << ": diverged at t = " << e.time() << '\n';
    } catch (const NumericalFailure& e) {
      rec.settling.error = e.what();
      result.exit_code = kExitDiverged;
      log << "run " << i << ": " << e.what() << '\n';
    }

    rj["settled"] = rec.settling.settled;
    rj["t_settle"] = optional_number(rec.settling.t_settle);
    rj["error"] = rec.settling.error ? json(*rec.settling.error) : json(nullptr);
    rj["divergence_time"] = optional_number(rec.settling.divergence_time);
    rj["reference_bound"] = optional_number(rec.reference_bound);
    rj["max_abs_estimate"] = optional_number(rec.max_abs_estimate);
    rj["estimate_cap"] = optional_number(rec.estimate_cap);
    runs.push_back(rj);

    log << "run " << i << ": ";
    if (rec.settling.settled) {
      log << "settled at t = " << *rec.settling.t_settle;
    } else if (!rec.settling.error) {
      log << "not settled within the horizon";
    } else {
      log << "failed";
    }
    if (rec.reference_bound) log << " (bound " << *rec.reference_bound << ")";
    log << '\n';
    result.runs.push_back(std::move(rec));
  }
  summary["runs"] = runs;

  // Spread of settling times across initial states: near 1 for fixed-time loops.
  double t_min = std::numeric_limits<double>::infinity();
  double t_max = 0.0;
  bool all_settled = true;
  for (const auto& r : result.runs) {
    if (!r.settling.settled) {
      all_settled = false;
      continue;
    }
    t_min = std::min(t_min, *r.settling.t_settle);
    t_max = std::max(t_max, *r.settling.t_settle);
  }
  summary["all_settled"] = all_settled;
  summary["settling_spread"] =
      (all_settled && t_min > 0.0) ? json(t_max / t_min) : json(nullptr);

  if (sc.certify) {
    result.certification = certify_builtin(sc.system.name);
    summary["certification"] = report_json(*result.certification);
    const auto cert = dir / "certification.json";
    std::ofstream(cert) << certification_to_json(*result.certification) << '\n';
    result.files.push_back(cert);
    log << "certification: " << (result.certification->passed ? "pass" : "fail") << '\n';
  }

  result.summary_json = summary.dump(2);
  const auto summary_path = dir / "summary.json";
  std::ofstream(summary_path) << result.summary_json << '\n';
  result.files.push_back(summary_path);
  return result;
}

}  // namespace ofts
