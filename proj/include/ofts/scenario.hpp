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

// Scenario documents: a system or plant, an optional controller, integrator
// settings and a list of initial states. Scenarios are JSON; the built-in
// ones are stored in the same format.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ofts/certify.hpp"
#include "ofts/sim.hpp"
#include "ofts/types.hpp"

namespace ofts {

inline constexpr int kScenarioSchemaVersion = 1;
inline constexpr int kSummarySchemaVersion = 1;

/// Malformed or inconsistent scenario; the message names the offending key.
class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SystemSpec {
  enum class Kind { kBuiltin, kPlant, kComparison };
  Kind kind = Kind::kBuiltin;
  std::string name;            // builtin system or plant name
  std::optional<Vector> theta; // plant only
  // Comparison system V' = -c V^mu, or -k1 V^mu - k2 V^nu when two_rate.
  bool two_rate = false;
  double c = 1.0;
  double mu = 0.5;
  double k2 = 0.0;
  double nu = 0.0;
};

struct ControllerSpec {
  /// "none", "finite-time", "adaptive-finite-time", "fixed-time" or
  /// "adaptive-fixed-time".
  std::string type = "none";
  /// false drops the uncertainty and closes the loop on (A, B) only.
  bool uncertainty = true;
  double alpha = 0.5;
  double l = 1.0;
  double s = 1.0;
  double gamma = 1.0;
  bool audit = true;  // reject (l, s) that fail the sphere audit
  double nu1 = -0.5;
  double nu2 = 0.5;
  double theta_max = 5.0;
  std::optional<std::string> ilf_json;  // explicit ILF parameters
  std::uint64_t seed = 1;               // LMI synthesis seed otherwise
};

struct Scenario {
  std::string name;
  std::string description;
  SystemSpec system;
  ControllerSpec controller;
  IntegratorConfig integrator;
  std::vector<Vector> initial_states;
  std::optional<Vector> initial_estimate;  // adaptive loops; zero by default
  double settle_eps = 1e-3;
  double dwell = 1.0;
  bool certify = false;
};

/// Throws ScenarioError with the key path or parse position.
Scenario parse_scenario(const std::string& json_text);
/// Reads and parses a file.
Scenario load_scenario(const std::filesystem::path& path);

/// Names and one-line descriptions in a fixed order.
std::vector<std::pair<std::string, std::string>> list_builtin_scenarios();
bool is_builtin_scenario(const std::string& name);
/// Throws ScenarioError for unknown names.
Scenario builtin_scenario(const std::string& name);
/// The JSON text of a built-in scenario.
std::string builtin_scenario_json(const std::string& name);

struct RunOverrides {
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<std::uint64_t> seed;
};

void apply_overrides(Scenario& scenario, const RunOverrides& overrides);

/// Exit codes of run_scenario.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDiverged = 3;
inline constexpr int kExitInfeasible = 4;

struct RunRecord {
  Vector x0;
  SettlingEstimate settling;
  std::optional<double> reference_bound;  // closed-form bound when known
  std::optional<double> max_abs_estimate;
  std::optional<double> estimate_cap;
};

struct ScenarioResult {
  int exit_code = kExitOk;
  std::vector<RunRecord> runs;
  std::vector<std::filesystem::path> files;
  std::string summary_json;
  std::optional<CertificationReport> certification;
};

/// Runs every initial state, writing run_<i>.csv (and estimate_<i>.csv for
/// adaptive loops), summary.json and, when enabled, certification.json under
/// out_dir / scenario.name. Progress and diagnostics go to `log`.
ScenarioResult run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir,
                            std::ostream& log);

/// Certification of a built-in example with its reference rates over 10^4
/// quasi-random samples of |x1|, |x2| <= 2.
CertificationReport certify_builtin(const std::string& name);

/// JSON rendering of a certification report.
std::string certification_to_json(const CertificationReport& report);

}  // namespace ofts
