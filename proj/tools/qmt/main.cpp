// Copyright 2026 qmstransport Authors
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

#include <cstdlib>
#include <iostream>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "qmt/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qmt: transport distances, curvature and functional inequalities for quantum Markov semigroups"};
  app.require_subcommand(1, 1);

  qmt::cli::RunOptions opt;
  std::uint64_t seed = 0;
  std::string out;
  const std::pair<const char*, const char*> commands[] = {
      {"validate", "Check the structure axioms and write validate.json"},
      {"distance", "Pairwise transport distances between endpoint states"},
      {"ricci", "Ricci lower bound by intertwining or Rayleigh scan"},
      {"inequalities", "MLSI, Talagrand, T1 and Poincare constants"},
      {"evolve", "Entropy and Fisher information along the semigroup"},
      {"geodesic", "Shoot a geodesic from (rho0, A0)"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--scenario", opt.scenario_path, "Scenario JSON")->required();
    sub->add_option("--seed", seed, "Seed overriding the scenario seed");
    sub->add_option("--out", out, "Output directory");
    sub->add_flag("--allow-nonconvex", opt.allow_nonconvex, "Accept means outside the convex class");
    sub->add_flag("--dump-normalized", opt.dump_normalized, "Print the normalized scenario and exit");
    sub->add_option("--tol-override", opt.overrides, "KEY=VAL applied to every task block");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : qmt::cli::kSchema;
  }
  for (CLI::App* sub : app.get_subcommands()) {
    opt.command = sub->get_name();
    if (sub->count("--seed")) opt.seed = seed;
    if (sub->count("--out")) opt.out_dir = out;
  }
  if (const char* env = std::getenv("QMS_THREADS")) {
    try {
      size_t used = 0;
      opt.threads = std::stoi(env, &used);
      if (used != std::string(env).size() || opt.threads < 1) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      std::cerr << "schema error: QMS_THREADS must be a positive integer\n";
      return qmt::cli::kSchema;
    }
  }
  return qmt::cli::run(opt);
}
