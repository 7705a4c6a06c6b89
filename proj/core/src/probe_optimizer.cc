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
#include "probmetro/probe_optimizer.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "probmetro/asymptotics.h"
#include "probmetro/errors.h"
#include "probmetro/log_math.h"
#include "probmetro/tradeoff.h"
#include "probmetro/tridiagonal.h"

namespace probmetro {
namespace {

// Quadratic forms of the probe at fixed filters:
//   success   = sum_beta diag[beta] c_beta^2
//   coherence = sum_beta off[beta] c_beta c_{beta+1}
struct ProbeForms {
  std::vector<double> diag;
  std::vector<double> off;
};

// filter == nullptr means f = 1 everywhere.
ProbeForms probe_forms(int n, double r, const FilterProfile* filter) {
  ProbeForms q{std::vector<double>(n + 1, 0.0), std::vector<double>(n, 0.0)};
  for (int tj = n; tj >= 0; tj -= 2) {
    Spin j = Spin::FromTwice(tj);
    const BlockFilter* bf = filter ? filter->find(j) : nullptr;
    if (filter && !bf) continue;
    int steps = (n - tj) / 2;
    double log_pre = std::log(block_multiplicity(n, j).convert_to<double>()) +
                     (steps == 0 ? 0.0 : steps * std::log1p(-r * r));
    if (log_pre == kNegInf) continue;
    for (int i = 0; i < j.dim(); ++i) {
      int tm = j.twice_m(i);
      int beta = (n - tm) / 2;
      double f = bf ? bf->f[i] : 1.0;
      double ld = log_dephasing_core(j, tm, tm, r);
      q.diag[beta] += f * f * std::exp(log_pre + ld - log_binomial(n, beta));
      if (i + 1 < j.dim()) {
        double f2 = bf ? bf->f[i + 1] : 1.0;
        double lo = log_dephasing_core(j, tm + 2, tm, r);
        // Sublevels m and m+1 sit at beta and beta-1.
        q.off[beta - 1] += f * f2 *
                           std::exp(log_pre + lo - 0.5 * (log_binomial(n, beta) +
                                                          log_binomial(n, beta - 1)));
      }
    }
  }
  return q;
}

// Maximizes coherence / success over c >= 0 by a Perron vector.
std::vector<double> best_ratio_probe(const ProbeForms& q) {
  int d = static_cast<int>(q.diag.size());
  double top = *std::max_element(q.diag.begin(), q.diag.end());
  std::vector<double> b(d);
  for (int i = 0; i < d; ++i) b[i] = std::max(q.diag[i], 1e-300 * top);
  SymTridiagonal t;
  t.diag.assign(d, 0.0);
  t.off.resize(d - 1);
  for (int i = 0; i + 1 < d; ++i) t.off[i] = -q.off[i] / std::sqrt(b[i] * b[i + 1]);
  std::vector<double> w = lowest_eigenpair(t).vector;
  std::vector<double> c(d);
  for (int i = 0; i < d; ++i) c[i] = std::max(0.0, w[i]) / std::sqrt(b[i]);
  double norm = std::sqrt(std::inner_product(c.begin(), c.end(), c.begin(), 0.0));
  for (double& v : c) v /= norm;
  return c;
}

std::vector<double> normalized(std::vector<double> c) {
  double norm = std::sqrt(std::inner_product(c.begin(), c.end(), c.begin(), 0.0));
  for (double& v : c) v /= norm;
  return c;
}

}  // namespace

ProbeMode parse_probe_mode(const std::string& name) {
  if (name == "multicopy") return ProbeMode::kMulticopy;
  if (name == "asymptotic-opt") return ProbeMode::kAsymptoticOptimal;
  if (name == "conjectured") return ProbeMode::kConjectured;
  if (name == "numeric-opt") return ProbeMode::kNumericOptimal;
  throw ValidationError("unknown probe mode '" + name + "'");
}

std::string probe_mode_name(ProbeMode mode) {
  switch (mode) {
    case ProbeMode::kMulticopy: return "multicopy";
    case ProbeMode::kAsymptoticOptimal: return "asymptotic-opt";
    case ProbeMode::kConjectured: return "conjectured";
    case ProbeMode::kNumericOptimal: return "numeric-opt";
  }
  return "";
}

double probe_precision(const ProbeSpec& probe, const NoiseModel& noise, double S) {
  return global_tradeoff(decompose(probe, noise), S).sigma2;
}

ProbeOptimization optimize_probe(int n, double r,
                                 const ProbeOptimizationOptions& options) {
  if (n < 1 || n > options.max_n) {
    throw DomainError("numeric probe optimization supports 1 <= n <= " +
                      std::to_string(options.max_n));
  }
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("numeric probe optimization needs 0 < r <= 1");
  if (!(options.S > 0.0 && options.S <= 1.0)) {
    throw DomainError("success probability must lie in (0, 1]");
  }
  NoiseModel noise = NoiseModel::FromStrength(r);
  ProbeOptimization out{ProbeSpec::Custom(n, best_ratio_probe(probe_forms(n, r, nullptr))),
                        0.0, 1};
  out.sigma2 = probe_precision(out.probe, noise, options.S);
  if (options.S >= 1.0) return out;

  for (; out.iterations < options.max_iterations; ++out.iterations) {
    TradeoffPoint pt = global_tradeoff(decompose(out.probe, noise), options.S);
    std::vector<double> target = best_ratio_probe(probe_forms(n, r, &pt.filter));
    const std::vector<double>& cur = out.probe.amplitudes();
    bool improved = false;
    for (double t = 1.0; t >= 1.0 / 64; t *= 0.5) {
      std::vector<double> c(n + 1);
      for (int i = 0; i <= n; ++i) c[i] = (1.0 - t) * cur[i] + t * target[i];
      ProbeSpec cand = ProbeSpec::Custom(n, normalized(std::move(c)));
      double s2 = probe_precision(cand, noise, options.S);
      if (s2 < out.sigma2) {
        double change = out.sigma2 - s2;
        out.probe = std::move(cand);
        out.sigma2 = s2;
        improved = true;
        if (change < options.tolerance) return out;
        break;
      }
    }
    if (!improved) return out;
  }
  throw SolverError("probe optimization did not settle within " +
                    std::to_string(options.max_iterations) + " rounds");
}

ProbeSpec make_probe(ProbeMode mode, int n, double r,
                     const ProbeOptimizationOptions& options) {
  switch (mode) {
    case ProbeMode::kMulticopy: return ProbeSpec::Multicopy(n);
    case ProbeMode::kAsymptoticOptimal: return optimal_probe_asymptotic(n, r);
    case ProbeMode::kConjectured: return conjectured_probe(n, r);
    case ProbeMode::kNumericOptimal: return optimize_probe(n, r, options).probe;
  }
  throw ValidationError("unknown probe mode");
}

}  // namespace probmetro
