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
#include "commands.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "probmetro/asymptotics.h"
#include "probmetro/errors.h"
#include "probmetro/filter_solver.h"
#include "probmetro/number_format.h"
#include "probmetro/oracle.h"
#include "probmetro/probe_io.h"
#include "probmetro/probe_optimizer.h"
#include "probmetro/sdp.h"
#include "probmetro/spin_blocks.h"
#include "probmetro/tradeoff.h"
#include "table.h"

namespace probmetro::cli {
namespace {

ProbeSpec load_probe(const RunConfig& config) {
  if (config.probe == "multicopy") {
    if (config.n < 1) throw ValidationError("--n is required for the multicopy probe");
    return ProbeSpec::Multicopy(config.n);
  }
  ProbeSpec probe = read_probe_file(config.probe);
  if (config.n != 0 && config.n != probe.n()) {
    throw ValidationError("--n " + std::to_string(config.n) +
                          " disagrees with the probe file (n=" +
                          std::to_string(probe.n()) + ")");
  }
  return probe;
}

BlockDecomposition load_decomposition(const RunConfig& config) {
  return decompose(load_probe(config), NoiseModel::FromStrength(config.r),
                   DecomposeOptions{config.threads});
}

std::vector<int> parse_n_list(const RunConfig& config) {
  std::vector<int> out;
  if (config.n_list.empty()) {
    if (config.n < 1) throw ValidationError("give --n or --n-list");
    out.push_back(config.n);
    return out;
  }
  std::stringstream in(config.n_list);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || value < 1) {
      throw ValidationError("bad entry in --n-list: '" + item + "'");
    }
    out.push_back(value);
  }
  if (out.empty()) throw ValidationError("--n-list is empty");
  return out;
}

double relative(double numeric, double formula) {
  return numeric / formula - 1.0;
}

}  // namespace

int cmd_decompose(const RunConfig& config, std::ostream& out) {
  const ProbeSpec probe = load_probe(config);
  const NoiseModel noise = NoiseModel::FromStrength(config.r);
  const BlockDecomposition d = decompose(probe, noise, DecomposeOptions{config.threads});
  Table table;
  table.columns = {"j", "p", "nu", "log_nu", "trace_error", "psd_margin"};
  double total = 0.0;
  for (const SpinBlock& b : d.blocks) {
    double trace = 0.0;
    for (double x : b.diag) trace += x;
    double psd = std::nan("");
    if (b.j.dim() <= 512) {
      const Eigen::MatrixXd rho = full_block_matrix(probe, noise, b.j);
      psd = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(rho, Eigen::EigenvaluesOnly)
                .eigenvalues()
                .minCoeff();
    }
    table.rows.push_back({b.j.value(), b.probability, b.multiplicity.str(),
                          b.log_multiplicity, std::abs(trace - 1.0), psd});
    total += b.probability;
  }
  table.add_meta("n", static_cast<long long>(d.n));
  table.add_meta("r", d.r);
  table.add_meta("sum_p", total);
  write_table(out, table, parse_format(config.format));
  return kExitOk;
}

int cmd_tradeoff(const RunConfig& config, std::ostream& out) {
  if (config.solver != "activeset" && config.solver != "sdp" && config.solver != "both") {
    throw ValidationError("--solver must be activeset, sdp or both");
  }
  const Format format = parse_format(config.format);
  const std::vector<double> grid = parse_s_grid(config.s_grid);
  const BlockDecomposition d = load_decomposition(config);
  const TradeoffSolver solver(d);
  const bool active = config.solver != "sdp";
  const bool sdp = config.solver != "activeset";

  Table table;
  table.columns = {"S_bar", "S", "F", "sigma2", "n_sigma2"};
  if (config.solver == "both") table.columns.push_back("sigma2_sdp");
  const double per_block = solver.critical_success(CriticalMode::kPerBlock);
  const double max_block = solver.critical_success(CriticalMode::kMaxBlock);
  table.add_meta("n", static_cast<long long>(d.n));
  table.add_meta("r", d.r);
  table.add_meta("S_star_per_block", per_block);
  table.add_meta("S_bar_star_per_block", 1.0 - per_block);
  table.add_meta("S_star_max_block", max_block);
  table.add_meta("S_bar_star_max_block", 1.0 - max_block);

  int status = kExitOk;
  for (double s_bar : grid) {
    const double S = 1.0 - s_bar;
    try {
      double sigma2 = 0.0;
      std::vector<Cell> row;
      if (active) sigma2 = solver.solve(S).sigma2;
      double relaxed = 0.0;
      if (sdp) relaxed = sdp_solve(d, S).objective;
      if (!active) sigma2 = relaxed;
      row = {s_bar, S, 1.0 - 0.25 * sigma2, sigma2, d.n * sigma2};
      if (active && sdp) row.push_back(relaxed);
      table.rows.push_back(std::move(row));
    } catch (const SolverError& e) {
      table.add_meta("error", "S_bar=" + format_number(s_bar) + ": " + e.what());
      status = kExitSolver;
      break;
    } catch (const ConsistencyError& e) {
      table.add_meta("error", "S_bar=" + format_number(s_bar) + ": " + e.what());
      status = kExitSolver;
      break;
    }
  }
  write_table(out, table, format);
  return status;
}

int cmd_ultimate(const RunConfig& config, std::ostream& out) {
  const Format format = parse_format(config.format);
  if (config.probe != "multicopy") {
    throw ValidationError("ultimate works with the multicopy probe");
  }
  Table table;
  table.columns = {"n", "j", "p_J", "s_star_J", "S_star_max_block", "S_star_per_block",
                   "sigma2_ground", "sigma2_formula", "rel_dev", "n2_sigma2_ground"};
  table.add_meta("r", config.r);
  for (int n : parse_n_list(config)) {
    const BlockDecomposition d = decompose(ProbeSpec::Multicopy(n),
                                           NoiseModel::FromStrength(config.r),
                                           DecomposeOptions{config.threads});
    const TradeoffSolver solver(d);
    const auto& top = solver.models().front();
    const double ground = top.ground_energy;
    const UltimateBound formula = sigma_ult(n, config.r);
    table.rows.push_back({static_cast<long long>(n), top.block->j.value(),
                          top.block->probability, top.s_star,
                          solver.critical_success(CriticalMode::kMaxBlock),
                          solver.critical_success(CriticalMode::kPerBlock), ground,
                          formula.sigma2, relative(ground, formula.sigma2),
                          double(n) * n * ground});
  }
  write_table(out, table, format);
  return kExitOk;
}

int cmd_scavenge(const RunConfig& config, std::ostream& out) {
  const Format format = parse_format(config.format);
  const std::vector<double> grid = parse_s_grid(config.s_grid);
  const BlockDecomposition d = load_decomposition(config);
  const TradeoffSolver solver(d);
  Table table;
  table.columns = {"S_bar", "sigma2_succ", "sigma2_fail", "sigma2_all", "sigma2_det",
                   "gentle_margin"};
  table.add_meta("n", static_cast<long long>(d.n));
  table.add_meta("r", d.r);
  int status = kExitOk;
  for (double s_bar : grid) {
    const double S = 1.0 - s_bar;
    try {
      const TradeoffPoint point = solver.solve(S);
      const ScavengeReport rep = scavenged_precision(d, S, point.filter);
      table.rows.push_back({s_bar, rep.sigma2_success,
                            rep.sigma2_fail.value_or(std::nan("")), rep.sigma2_all,
                            rep.sigma2_det, rep.gentle.margin});
    } catch (const SolverError& e) {
      table.add_meta("error", "S_bar=" + format_number(s_bar) + ": " + e.what());
      status = kExitSolver;
      break;
    }
  }
  write_table(out, table, format);
  return status;
}

int cmd_asymptote(const RunConfig& config, std::ostream& out) {
  const Format format = parse_format(config.format);
  std::vector<std::string> quantities;
  if (config.quantity == "all") {
    quantities = {"det", "ult", "opt", "finite"};
  } else if (config.quantity == "det" || config.quantity == "ult" ||
             config.quantity == "opt" || config.quantity == "finite" ||
             config.quantity == "finite-first") {
    quantities = {config.quantity};
  } else {
    throw ValidationError("--quantity must be det, ult, opt, finite, finite-first or all");
  }
  RunConfig list_config = config;
  if (list_config.n_list.empty() && list_config.n < 1) list_config.n_list = "50,100,200,400";
  const std::vector<int> ns = parse_n_list(list_config);
  const NoiseModel noise = NoiseModel::FromStrength(config.r);

  Table table;
  table.columns = {"quantity", "n", "formula", "numeric", "rel_dev"};
  table.add_meta("r", config.r);
  table.add_meta("s_bar", config.s_bar);
  for (const std::string& q : quantities) {
    for (int n : ns) {
      double formula = 0.0;
      double numeric = 0.0;
      if (q == "opt") {
        formula = sigma_opt_det(n, config.r);
        numeric = n <= ProbeOptimizationOptions{}.max_n
                      ? optimize_probe(n, config.r).sigma2
                      : probe_precision(optimal_probe_asymptotic(n, config.r), noise);
      } else {
        const BlockDecomposition d = decompose(ProbeSpec::Multicopy(n), noise,
                                               DecomposeOptions{config.threads});
        const TradeoffSolver solver(d);
        if (q == "det") {
          formula = sigma_det_asymptotic(n, config.r);
          numeric = solver.solve(1.0).sigma2;
        } else if (q == "ult") {
          formula = sigma_ult(n, config.r).sigma2;
          numeric = solver.models().front().ground_energy;
        } else {
          formula = q == "finite" ? sigma_finite_s(n, config.r, config.s_bar)
                                  : sigma_finite_s_first_form(n, config.r, config.s_bar);
          numeric = solver.solve(1.0 - config.s_bar).sigma2;
        }
      }
      table.rows.push_back({q, static_cast<long long>(n), formula, numeric,
                            relative(numeric, formula)});
    }
  }
  write_table(out, table, format);
  return kExitOk;
}

int cmd_probe(const RunConfig& config, std::ostream& out) {
  if (config.n < 1) throw ValidationError("--n is required");
  const ProbeMode mode = parse_probe_mode(config.mode);
  ProbeOptimizationOptions options;
  options.S = config.S;
  const ProbeSpec probe = make_probe(mode, config.n, config.r, options);
  const double sigma2 =
      probe_precision(probe, NoiseModel::FromStrength(config.r), config.S);
  std::ostringstream comment;
  comment << "mode=" << probe_mode_name(mode) << " r=" << format_number(config.r)
          << " S=" << format_number(config.S) << " sigma2=" << format_number(sigma2);
  write_probe(out, probe, comment.str());
  return kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
  VerificationOptions options;
  if (config.n != 0) {
    if (config.n < 1 || config.n > 4) throw ValidationError("verify needs 1 <= n <= 4");
    options.n_max = config.n;
  }
  if (config.r_given) options.r_values = {config.r};
  options.seed = config.seed;
  options.inject_fault = config.inject_fault;
  const VerificationReport report = run_verification(options);

  const Format format = config.format_given ? parse_format(config.format) : Format::kJson;
  Table table;
  table.columns = {"check", "passed", "value", "tolerance", "margin", "cases", "worst_case"};
  table.add_meta("passed", report.all_passed());
  for (const VerificationCheck& c : report.checks) {
    table.rows.push_back({c.name, c.passed, c.value, c.tolerance,
                          c.margin, static_cast<long long>(c.cases), c.worst_case});
  }
  write_table(out, table, format);
  return report.all_passed() ? kExitOk : kExitVerifyFailed;
}

}  // namespace probmetro::cli
