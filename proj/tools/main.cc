// Copyright 2021 Google LLC
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "commands.h"
#include "probmetro/errors.h"

namespace {

using probmetro::cli::RunConfig;

int run(const std::function<int(const RunConfig&, std::ostream&)>& command,
        const RunConfig& config, const std::string& out_path) {
  std::ostringstream buffer;
  int status = probmetro::cli::kExitOk;
  try {
    status = command(config, buffer);
  } catch (const probmetro::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    status = probmetro::cli::kExitSolver;
  } catch (const probmetro::ConsistencyError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    status = probmetro::cli::kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return probmetro::cli::kExitInput;
  }
  if (out_path.empty()) {
    std::cout << buffer.str();
  } else {
    std::ofstream file(out_path);
    if (!file || !(file << buffer.str())) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return probmetro::cli::kExitInput;
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal probabilistic phase estimation under local dephasing."};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "File of key=value lines; flags take precedence");

  RunConfig config;
  std::string out_path;
  app.add_option("--n", config.n, "Number of qubits")->check(CLI::PositiveNumber);
  auto* r_option =
      app.add_option("--r", config.r, "Dephasing strength r in [0, 1] (default 0.8)")
          ->check(CLI::Range(0.0, 1.0));
  app.add_option("--probe", config.probe, "'multicopy' or a probe file path");
  app.add_option("--s-grid", config.s_grid,
                 "S_bar grid: default[:N] | uniform:N[:lo:hi] | geom:N:Smin:Smax | "
                 "list:v1,v2,...; parts joined by '+'");
  app.add_option("--solver", config.solver, "activeset | sdp | both")
      ->check(CLI::IsMember({"activeset", "sdp", "both"}));
  auto* format_option = app.add_option("--format", config.format, "csv | json")
                            ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", out_path, "Output path (default stdout)");
  app.add_option("--threads", config.threads, "Worker thread cap")->check(CLI::PositiveNumber);
  app.add_option("--seed", config.seed, "Seed for randomized checks");

  auto* decompose = app.add_subcommand(
      "decompose", "Spin-block table of the dephased probe: j, p_j, multiplicity, "
                   "trace and PSD checks.");
  auto* tradeoff = app.add_subcommand(
      "tradeoff",
      "Optimal precision against abstention S_bar = 1 - S. Reproduces the curve of "
      "n sigma^2 versus S_bar with its plateau (critical abstention markers for both "
      "block-filtering and maximal-block post-selection in the header). Run it over "
      "several n for the family of curves showing how precision scales with n.");
  auto* ultimate = app.add_subcommand(
      "ultimate",
      "Maximal-block post-selection: ground energy of the largest block against the "
      "closed-form ultimate bound, with the critical success probabilities.");
  ultimate->add_option("--n-list", config.n_list, "Comma separated qubit counts");
  auto* scavenge = app.add_subcommand(
      "scavenge",
      "Failure-branch scavenging: sigma^2 of the success branch, the failure branch "
      "and their combination against S_bar, compared with the deterministic protocol "
      "Includes the gentle-measurement margin.");
  auto* asymptote = app.add_subcommand(
      "asymptote",
      "Closed-form asymptotics against exact numerics: deterministic (det), ultimate "
      "(ult), optimal deterministic probe (opt) and finite abstention (finite, "
      "finite-first). 'opt' optimizes the probe numerically up to n=60 and evaluates "
      "the Gaussian probe exactly beyond.");
  asymptote->add_option("--n-list", config.n_list,
                        "Comma separated qubit counts (default 50,100,200,400)");
  asymptote->add_option("--quantity", config.quantity,
                        "det | ult | opt | finite | finite-first | all");
  asymptote->add_option("--s-bar", config.s_bar, "Abstention for the finite forms")
      ->check(CLI::Range(0.0, 1.0));
  auto* probe = app.add_subcommand(
      "probe",
      "Write a probe file: multicopy, the asymptotically optimal Gaussian, the "
      "conjectured cosine-Gaussian, or a numerically optimized probe (n <= 60).");
  probe->add_option("--mode", config.mode,
                    "multicopy | asymptotic-opt | conjectured | numeric-opt");
  probe->add_option("--S", config.S, "Success probability for numeric-opt")
      ->check(CLI::Range(0.0, 1.0));
  auto* verify = app.add_subcommand(
      "verify",
      "Cross-check block formulas, solvers and filters against dense 2^n oracles for "
      "every n up to --n (default 4, at most 4). JSON report unless --format is given.");
  verify->add_option("--inject-fault", config.inject_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : probmetro::cli::kExitInput;
  }
  config.r_given = r_option->count() > 0;
  config.format_given = format_option->count() > 0;

  namespace cmd = probmetro::cli;
  if (*decompose) return run(cmd::cmd_decompose, config, out_path);
  if (*tradeoff) return run(cmd::cmd_tradeoff, config, out_path);
  if (*ultimate) return run(cmd::cmd_ultimate, config, out_path);
  if (*scavenge) return run(cmd::cmd_scavenge, config, out_path);
  if (*asymptote) return run(cmd::cmd_asymptote, config, out_path);
  if (*probe) return run(cmd::cmd_probe, config, out_path);
  if (*verify) return run(cmd::cmd_verify, config, out_path);
  return probmetro::cli::kExitInput;
}
