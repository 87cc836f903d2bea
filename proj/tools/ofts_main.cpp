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

// ofts: run scenarios, list the built-in ones, certify built-in examples.
//
//   ofts list
//   ofts run <scenario-file|builtin-name> [--out DIR] [--dt F] [--horizon F] [--seed N]
//   ofts certify <builtin-name>
//
// The output directory defaults to $OFTS_OUT_DIR, then ./ofts_out.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ofts/scenario.hpp"

namespace {

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("OFTS_OUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return "ofts_out";
}

int cmd_list() {
  for (const auto& [name, description] : ofts::list_builtin_scenarios()) {
    std::cout << name << "\t" << description << "\n";
  }
  return ofts::kExitOk;
}

int cmd_run(const std::string& target, const std::optional<std::string>& out,
            const ofts::RunOverrides& overrides) {
  ofts::Scenario sc = ofts::is_builtin_scenario(target)
                          ? ofts::builtin_scenario(target)
                          : ofts::load_scenario(target);
  ofts::apply_overrides(sc, overrides);
  const std::filesystem::path dir = out ? std::filesystem::path(*out) : default_out_dir();
  std::cerr << "running " << sc.name << " (" << sc.initial_states.size()
            << " initial states) into " << (dir / sc.name).string() << "\n";
  const ofts::ScenarioResult res = ofts::run_scenario(sc, dir, std::cerr);
  for (const auto& f : res.files) std::cout << f.string() << "\n";
  if (res.exit_code == ofts::kExitDiverged) {
    std::cerr << "error: at least one run diverged\n";
  }
  return res.exit_code;
}

int cmd_certify(const std::string& name) {
  const ofts::CertificationReport rep = ofts::certify_builtin(name);
  std::cout << ofts::certification_to_json(rep) << "\n";
  return rep.passed ? ofts::kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Output finite-time and fixed-time stability toolkit"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List built-in scenarios");

  auto* run = app.add_subcommand("run", "Run a scenario file or built-in scenario");
  std::string target;
  std::optional<std::string> out;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<std::uint64_t> seed;
  run->add_option("scenario", target, "Scenario file or built-in name")->required();
  run->add_option("--out", out, "Output directory");
  run->add_option("--dt", dt, "Integration step in seconds");
  run->add_option("--horizon", horizon, "Simulated time in seconds");
  run->add_option("--seed", seed, "Seed for LMI synthesis");

  auto* certify = app.add_subcommand("certify", "Audit a built-in example's Lyapunov conditions");
  std::string cert_target;
  certify->add_option("name", cert_target, "example1 or example2")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ofts::kExitUsage;
  }

  try {
    if (*list) return cmd_list();
    if (*run) return cmd_run(target, out, {dt, horizon, seed});
    if (*certify) return cmd_certify(cert_target);
  } catch (const ofts::ScenarioError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return ofts::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return ofts::kExitUsage;
}
