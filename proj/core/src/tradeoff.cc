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
#include "probmetro/tradeoff.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "probmetro/errors.h"
#include "probmetro/parallel.h"

namespace probmetro {
namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double coherence_of(const std::vector<double>& coupling,
                    const std::vector<double>& z) {
  double acc = 0.0;
  for (size_t i = 0; i < coupling.size(); ++i) acc += coupling[i] * z[i] * z[i + 1];
  return acc;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double to_double(const std::string& s) {
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  double v;
  if (!(in >> v) || !(in >> std::ws).eof()) {
    throw ValidationError("bad number in S grid: '" + s + "'");
  }
  return v;
}

int to_count(const std::string& s) {
  double v = to_double(s);
  if (v < 1 || v != std::floor(v) || v > 1e6) {
    throw ValidationError("bad point count in S grid: '" + s + "'");
  }
  return static_cast<int>(v);
}

}  // namespace

TradeoffSolver::TradeoffSolver(const BlockDecomposition& decomposition)
    : decomposition_(decomposition) {
  for (const SpinBlock& b : decomposition.blocks) {
    if (!(b.probability > 0.0)) continue;
    BlockModel m{&b, block_hamiltonian(b, decomposition.r), {}, 0.0, {}, 1.0, 0.0};
    m.h = m.problem.hamiltonian();
    BlockSolution g = ground_state(m.problem);
    m.ground_energy = g.multiplier;
    m.ground = g.xi;
    m.s_star = critical_probability(m.problem);
    std::vector<double> he = m.h.apply(m.problem.envelope);
    m.lambda_full = m.ground_energy;
    for (size_t i = 0; i < he.size(); ++i) {
      if (m.problem.envelope[i] > 0.0) {
        m.lambda_full = std::max(m.lambda_full, he[i] / m.problem.envelope[i]);
      }
    }
    models_.push_back(std::move(m));
  }
  if (models_.empty()) throw DomainError("decomposition has no populated block");
}

TradeoffSolver::Response TradeoffSolver::evaluate(double lambda, Side side) const {
  Response r;
  r.z.resize(models_.size());
  for (size_t k = 0; k < models_.size(); ++k) {
    const BlockModel& m = models_[k];
    std::vector<double>& z = r.z[k];
    if (lambda < m.ground_energy ||
        (lambda == m.ground_energy && side == Side::kLeft)) {
      z.assign(m.ground.size(), 0.0);
    } else if (lambda == m.ground_energy) {
      z = m.ground;
      for (double& v : z) v *= std::sqrt(m.s_star);
    } else if (lambda >= m.lambda_full) {
      z = m.problem.envelope;
    } else {
      z = response_at_multiplier(m.h, m.problem.envelope, lambda).z;
    }
    r.total += m.block->probability * dot(z, z);
  }
  return r;
}

TradeoffPoint TradeoffSolver::assemble(
    double S, double lambda, const std::vector<std::vector<double>>& z) const {
  TradeoffPoint pt;
  pt.S = S;
  pt.S_bar = 1.0 - S;
  pt.multiplier = lambda;
  double total = 0.0, share = 0.0;
  for (const SpinBlock& b : decomposition_.blocks) {
    BlockAllocation a;
    a.j = b.j;
    a.p = b.probability;
    a.multiplier = lambda;
    BlockFilter f{b.j, std::vector<double>(b.diag.size(), S >= 1.0 ? 1.0 : 0.0)};
    a.s = S >= 1.0 ? 1.0 : 0.0;
    a.coherence = S >= 1.0 ? coherence_of(b.coupling, f.f) : 0.0;
    for (size_t k = 0; k < models_.size(); ++k) {
      if (models_[k].block != &b) continue;
      const std::vector<double>& e = models_[k].problem.envelope;
      a.s = dot(z[k], z[k]);
      a.coherence = coherence_of(b.coupling, z[k]);
      for (size_t i = 0; i < e.size(); ++i) {
        f.f[i] = e[i] > 0.0 ? std::clamp(z[k][i] / e[i], 0.0, 1.0) : 0.0;
      }
      total += a.p * a.s;
      share += a.p * a.coherence;
    }
    a.sigma2 = a.s > 0.0 ? 2.0 - 2.0 * a.coherence / a.s
                         : std::numeric_limits<double>::quiet_NaN();
    pt.blocks.push_back(a);
    pt.filter.blocks.push_back(std::move(f));
  }
  if (std::abs(total - S) > 1e-9 * std::max(1.0, S)) {
    throw ConsistencyError("allocation sums to " + std::to_string(total) +
                           " instead of " + std::to_string(S));
  }
  pt.sigma2 = 2.0 - 2.0 * share / S;
  pt.F = 1.0 - 0.25 * pt.sigma2;
  return pt;
}

TradeoffPoint TradeoffSolver::solve(double S) const {
  if (!(S > 0.0 && S <= 1.0)) {
    throw DomainError("success probability must lie in (0, 1]");
  }
  double lambda_max = -std::numeric_limits<double>::infinity();
  for (const BlockModel& m : models_) lambda_max = std::max(lambda_max, m.lambda_full);
  if (S >= 1.0 - 1e-14) {
    std::vector<std::vector<double>> z;
    for (const BlockModel& m : models_) z.push_back(m.problem.envelope);
    double total = 0.0;
    for (size_t k = 0; k < models_.size(); ++k) {
      total += models_[k].block->probability * dot(z[k], z[k]);
    }
    return assemble(S, lambda_max, z);
  }

  std::vector<double> breaks;
  for (const BlockModel& m : models_) breaks.push_back(m.ground_energy);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  auto bisect = [&](double lo, double hi, Response r_lo, Response r_hi) {
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      Response r = evaluate(mid, Side::kRight);
      if (r.total < S) {
        lo = mid;
        r_lo = std::move(r);
      } else {
        hi = mid;
        r_hi = std::move(r);
      }
    }
    // Blend the two bracketing responses so the total hits S exactly.
    double a = 0.0, b = 0.0, c = r_lo.total - S;
    for (size_t k = 0; k < models_.size(); ++k) {
      double p = models_[k].block->probability;
      std::vector<double> dz(r_lo.z[k].size());
      for (size_t i = 0; i < dz.size(); ++i) dz[i] = r_hi.z[k][i] - r_lo.z[k][i];
      a += p * dot(dz, dz);
      b += 2.0 * p * dot(r_lo.z[k], dz);
    }
    double theta = 0.0;
    if (a > 0.0) {
      theta = (-b + std::sqrt(std::max(0.0, b * b - 4.0 * a * c))) / (2.0 * a);
    } else if (b > 0.0) {
      theta = -c / b;
    }
    theta = std::clamp(theta, 0.0, 1.0);
    std::vector<std::vector<double>> z(models_.size());
    for (size_t k = 0; k < models_.size(); ++k) {
      z[k].resize(r_lo.z[k].size());
      for (size_t i = 0; i < z[k].size(); ++i) {
        z[k][i] = r_lo.z[k][i] + theta * (r_hi.z[k][i] - r_lo.z[k][i]);
      }
    }
    return assemble(S, 0.5 * (lo + hi), z);
  };

  Response prev;
  double prev_lambda = 0.0;
  for (size_t k = 0; k < breaks.size(); ++k) {
    Response left = evaluate(breaks[k], Side::kLeft);
    if (S <= left.total && k > 0) {
      return bisect(prev_lambda, breaks[k], std::move(prev), std::move(left));
    }
    Response right = evaluate(breaks[k], Side::kRight);
    if (S <= right.total) {
      // Blocks sitting exactly at this multiplier share the remainder.
      double frac = (S - left.total) / (right.total - left.total);
      std::vector<std::vector<double>> z = right.z;
      for (size_t q = 0; q < models_.size(); ++q) {
        if (models_[q].ground_energy == breaks[k]) {
          for (double& v : z[q]) v *= std::sqrt(frac);
        }
      }
      return assemble(S, breaks[k], z);
    }
    prev = std::move(right);
    prev_lambda = breaks[k];
  }
  return bisect(prev_lambda, lambda_max, std::move(prev),
                evaluate(lambda_max, Side::kRight));
}

double TradeoffSolver::critical_success(CriticalMode mode) const {
  if (mode == CriticalMode::kMaxBlock) {
    const BlockModel* top = &models_.front();
    for (const BlockModel& m : models_) {
      if (m.block->j > top->block->j) top = &m;
    }
    return top->block->probability * top->s_star;
  }
  double acc = 0.0;
  for (const BlockModel& m : models_) acc += m.block->probability * m.s_star;
  return acc;
}

TradeoffPoint global_tradeoff(const BlockDecomposition& decomposition,
                              double S) {
  return TradeoffSolver(decomposition).solve(S);
}

double critical_success(const BlockDecomposition& decomposition,
                        CriticalMode mode) {
  return TradeoffSolver(decomposition).critical_success(mode);
}

std::vector<double> default_s_grid(int points) {
  if (points < 4) throw ValidationError("default grid needs at least 4 points");
  // Uniform in S_bar up to 0.975, then geometric in S down to 1e-4.
  int uniform = (points * 5) / 8;
  int geometric = points - uniform;
  std::vector<double> g;
  for (int k = 0; k < uniform; ++k) g.push_back(0.975 * k / (uniform - 1));
  for (int k = 1; k <= geometric; ++k) {
    double S = 0.025 * std::pow(1e-4 / 0.025, static_cast<double>(k) / geometric);
    g.push_back(1.0 - S);
  }
  std::sort(g.begin(), g.end());
  return g;
}

std::vector<double> parse_s_grid(const std::string& text) {
  std::vector<double> g;
  for (const std::string& part : split(text, '+')) {
    std::vector<std::string> f = split(part, ':');
    if (f.empty()) throw ValidationError("empty S grid");
    const std::string& kind = f[0];
    if (kind == "default" && f.size() <= 2) {
      std::vector<double> d = default_s_grid(f.size() == 2 ? to_count(f[1]) : 64);
      g.insert(g.end(), d.begin(), d.end());
    } else if (kind == "uniform" && (f.size() == 2 || f.size() == 4)) {
      int n = to_count(f[1]);
      if (f.size() == 2) {
        for (int k = 0; k < n; ++k) g.push_back(static_cast<double>(k) / n);
      } else {
        double lo = to_double(f[2]), hi = to_double(f[3]);
        for (int k = 0; k < n; ++k) {
          g.push_back(n == 1 ? lo : lo + (hi - lo) * k / (n - 1));
        }
      }
    } else if (kind == "geom" && f.size() == 4) {
      int n = to_count(f[1]);
      double smin = to_double(f[2]), smax = to_double(f[3]);
      if (!(smin > 0.0 && smax >= smin && smax <= 1.0)) {
        throw ValidationError("geom grid needs 0 < Smin <= Smax <= 1");
      }
      for (int k = 0; k < n; ++k) {
        double t = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
        g.push_back(1.0 - smin * std::pow(smax / smin, t));
      }
    } else if (kind == "list" && f.size() == 2) {
      for (const std::string& v : split(f[1], ',')) g.push_back(to_double(v));
    } else {
      throw ValidationError("unknown S grid term '" + part + "'");
    }
  }
  if (g.empty()) throw ValidationError("empty S grid");
  for (double v : g) {
    if (!(v >= 0.0 && v < 1.0)) {
      throw ValidationError("S_bar values must lie in [0, 1)");
    }
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

std::vector<TradeoffPoint> tradeoff_curve(const BlockDecomposition& decomposition,
                                          const std::vector<double>& s_bar_grid,
                                          const TradeoffOptions& options) {
  TradeoffSolver solver(decomposition);
  std::vector<TradeoffPoint> out(s_bar_grid.size());
  parallel_for(s_bar_grid.size(), options.threads, [&](std::size_t i) {
    out[i] = solver.solve(1.0 - s_bar_grid[i]);
  });
  return out;
}

GentleCheck gentle_bound_check(double F_det, double F_fail, double S) {
  GentleCheck g;
  g.margin = std::sqrt(2.0) * S - (F_det - F_fail);
  g.holds = g.margin >= -1e-9;
  return g;
}

ScavengeReport scavenged_precision(const BlockDecomposition& decomposition,
                                   double S, const FilterProfile& profile) {
  if (!(S > 0.0 && S <= 1.0)) {
    throw DomainError("success probability must lie in (0, 1]");
  }
  double succ = 0.0, succ_coh = 0.0, fail = 0.0, fail_coh = 0.0, det_coh = 0.0;
  for (const SpinBlock& b : decomposition.blocks) {
    const BlockFilter* f = profile.find(b.j);
    if (!f || f->f.size() != b.diag.size()) {
      throw ValidationError("filter profile does not match the decomposition");
    }
    BlockFilter fbar = complementary_filter(*f);
    succ += b.probability * filter_success(b, *f);
    succ_coh += b.probability * filter_coherence(b, *f);
    fail += b.probability * filter_success(b, fbar);
    fail_coh += b.probability * filter_coherence(b, fbar);
    det_coh += b.probability * std::accumulate(b.offdiag.begin(), b.offdiag.end(), 0.0);
  }
  if (std::abs(succ - S) > 1e-6) {
    throw ValidationError("filter profile has success " + std::to_string(succ) +
                          ", expected " + std::to_string(S));
  }
  ScavengeReport rep;
  rep.S = S;
  rep.sigma2_success = 2.0 - 2.0 * succ_coh / succ;
  rep.F_success = 1.0 - 0.25 * rep.sigma2_success;
  rep.sigma2_det = 2.0 - 2.0 * det_coh;
  rep.F_det = 1.0 - 0.25 * rep.sigma2_det;
  if (fail > 1e-12) {
    rep.sigma2_fail = 2.0 - 2.0 * fail_coh / fail;
    rep.F_fail = 1.0 - 0.25 * *rep.sigma2_fail;
    rep.F_all = succ * rep.F_success + fail * *rep.F_fail;
    rep.sigma2_all = 2.0 - 2.0 * (succ_coh + fail_coh);
    rep.gentle = gentle_bound_check(rep.F_det, *rep.F_fail, succ);
  } else {
    rep.F_all = rep.F_success;
    rep.sigma2_all = rep.sigma2_success;
    rep.gentle = {true, std::sqrt(2.0) * succ};
  }
  return rep;
}

}  // namespace probmetro
