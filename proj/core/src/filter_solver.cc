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
#include "probmetro/filter_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "probmetro/errors.h"

namespace probmetro {
namespace {

struct Run {
  int begin;
  int end;  // exclusive
};

std::vector<Run> runs_of(const std::vector<char>& mask) {
  std::vector<Run> out;
  int d = static_cast<int>(mask.size());
  for (int i = 0; i < d;) {
    if (!mask[i]) {
      ++i;
      continue;
    }
    int b = i;
    while (i < d && mask[i]) ++i;
    out.push_back({b, i});
  }
  return out;
}

SymTridiagonal sub_matrix(const SymTridiagonal& h, Run run) {
  SymTridiagonal t;
  t.diag.assign(h.diag.begin() + run.begin, h.diag.begin() + run.end);
  t.off.assign(h.off.begin() + run.begin, h.off.begin() + run.end - 1);
  return t;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Right-hand side for a free run: couplings to the fixed values just outside.
std::vector<double> boundary_rhs(const SymTridiagonal& h, Run run,
                                 const std::vector<double>& x) {
  int d = h.dim();
  std::vector<double> b(run.end - run.begin, 0.0);
  if (run.begin > 0) b.front() -= h.off[run.begin - 1] * x[run.begin - 1];
  if (run.end < d) b.back() -= h.off[run.end - 1] * x[run.end];
  return b;
}

struct Ground {
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> vector;  // full length, zero off the chosen run
};

// Lowest eigenpair over the runs of the support.
Ground support_ground(const SymTridiagonal& h, const std::vector<char>& support) {
  Ground g;
  g.vector.assign(h.dim(), 0.0);
  for (Run run : runs_of(support)) {
    Eigenpair ep = lowest_eigenpair(sub_matrix(h, run));
    if (ep.value < g.value) {
      g.value = ep.value;
      std::fill(g.vector.begin(), g.vector.end(), 0.0);
      for (int i = run.begin; i < run.end; ++i) {
        g.vector[i] = std::max(0.0, ep.vector[i - run.begin]);
      }
    }
  }
  double n = std::sqrt(dot(g.vector, g.vector));
  for (double& v : g.vector) v /= n;
  return g;
}

std::vector<char> support_of(std::span<const double> upper) {
  std::vector<char> s(upper.size());
  for (size_t i = 0; i < upper.size(); ++i) s[i] = upper[i] > 0.0;
  return s;
}

// Solves every free run of (H - lambda) x = b at once. False if not PD.
bool solve_runs(const SymTridiagonal& h, const std::vector<Run>& runs,
                const std::vector<std::vector<double>>& rhs, double lambda,
                std::vector<std::vector<double>>& out) {
  out.resize(runs.size());
  for (size_t k = 0; k < runs.size(); ++k) {
    if (!solve_shifted_spd(sub_matrix(h, runs[k]), lambda, rhs[k], out[k])) {
      return false;
    }
  }
  return true;
}

std::optional<BoxSphereResult> active_set(const SymTridiagonal& h,
                                          std::span<const double> upper,
                                          const std::vector<char>& support,
                                          int max_iterations) {
  int d = h.dim();
  if (runs_of(support).size() != 1) return std::nullopt;
  Ground g = support_ground(h, support);
  std::vector<double> x = g.vector;
  double lambda = g.value;
  std::vector<char> pinned(d, 0);
  for (int it = 0;; ++it) {
    bool changed = false;
    for (int i = 0; i < d; ++i) {
      if (support[i] && !pinned[i] && x[i] > upper[i] * (1.0 + 1e-12)) {
        pinned[i] = 1;
        changed = true;
      }
    }
    if (!changed) {
      std::vector<double> hx = h.apply(x);
      int worst = -1;
      double worst_mu = 0.0;
      for (int i = 0; i < d; ++i) {
        if (!pinned[i]) continue;
        double mu = lambda * upper[i] - hx[i];
        double tol = 1e-10 * (std::abs(lambda) * upper[i] + std::abs(hx[i])) + 1e-300;
        if (mu < -tol && (worst < 0 || mu < worst_mu)) {
          worst = i;
          worst_mu = mu;
        }
      }
      if (worst < 0) {
        BoxSphereResult res;
        res.x = x;
        res.value = h.quadratic_form(x);
        res.multiplier = lambda;
        res.iterations = it;
        return res;
      }
      pinned[worst] = 0;
    }
    if (it >= max_iterations) return std::nullopt;

    double r2 = 1.0;
    std::vector<char> unpinned(d);
    for (int i = 0; i < d; ++i) {
      if (pinned[i]) {
        x[i] = upper[i];
        r2 -= upper[i] * upper[i];
      } else if (!support[i]) {
        x[i] = 0.0;
      }
      unpinned[i] = support[i] && !pinned[i];
    }
    std::vector<Run> runs = runs_of(unpinned);
    if (r2 <= 0.0 || runs.empty()) return std::nullopt;

    std::vector<Run> driven, idle;
    std::vector<std::vector<double>> rhs;
    double b2 = 0.0;
    double lam_hi = std::numeric_limits<double>::infinity();
    for (Run run : runs) {
      std::vector<double> b = boundary_rhs(h, run, x);
      double bb = dot(b, b);
      if (bb == 0.0) {
        idle.push_back(run);
        continue;
      }
      driven.push_back(run);
      rhs.push_back(std::move(b));
      b2 += bb;
      lam_hi = std::min(lam_hi, eigenvalue_by_bisection(sub_matrix(h, run), 0));
    }
    if (driven.empty()) return std::nullopt;

    // Secular equation |x(lambda)| = R, Newton on 1/|x| inside a bracket.
    double radius = std::sqrt(r2);
    double lo = lam_hi - std::sqrt(b2) / radius;
    double hi = lam_hi;
    lambda = lo;
    std::vector<std::vector<double>> sol, dsol;
    bool solved = false;
    for (int k = 0; k < 200; ++k) {
      if (!solve_runs(h, driven, rhs, lambda, sol) ||
          !solve_runs(h, driven, sol, lambda, dsol)) {
        hi = lambda;
        lambda = 0.5 * (lo + hi);
        continue;
      }
      double nx2 = 0.0, xw = 0.0;
      for (size_t q = 0; q < sol.size(); ++q) {
        nx2 += dot(sol[q], sol[q]);
        xw += dot(sol[q], dsol[q]);
      }
      double nx = std::sqrt(nx2);
      solved = true;
      if (std::abs(nx - radius) <= 1e-15 * radius) break;
      double psi = 1.0 / nx - 1.0 / radius;
      if (psi > 0.0) {
        lo = lambda;
      } else {
        hi = lambda;
      }
      double next = lambda + psi * nx2 * nx / xw;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (next == lambda || hi - lo <= 4 * std::numeric_limits<double>::epsilon() *
                                           std::max(1.0, std::abs(lambda))) {
        break;
      }
      lambda = next;
    }
    if (!solved) return std::nullopt;
    for (Run run : idle) {
      if (eigenvalue_by_bisection(sub_matrix(h, run), 0) <= lambda) {
        return std::nullopt;  // hard case, leave it to the bisection path
      }
      for (int i = run.begin; i < run.end; ++i) x[i] = 0.0;
    }
    for (size_t q = 0; q < driven.size(); ++q) {
      for (int i = driven[q].begin; i < driven[q].end; ++i) {
        x[i] = sol[q][i - driven[q].begin];
      }
    }
  }
}

// Multiplier bisection on the fixed-lambda response. Slow but always works.
BoxSphereResult bisection_path(const SymTridiagonal& h,
                               std::span<const double> upper,
                               const std::vector<char>& support) {
  int d = h.dim();
  double t = 1.0 / dot(upper, upper);
  std::vector<double> e(d);
  for (int i = 0; i < d; ++i) e[i] = upper[i] * std::sqrt(t);

  Ground g = support_ground(h, support);
  double s_star = 1.0;
  for (int i = 0; i < d; ++i) {
    if (g.vector[i] > 0.0) s_star = std::min(s_star, e[i] * e[i] / (g.vector[i] * g.vector[i]));
  }
  BoxSphereResult res;
  res.used_fallback = true;
  if (t <= s_star) {
    res.x = g.vector;
    res.value = h.quadratic_form(res.x);
    res.multiplier = g.value;
    return res;
  }
  std::vector<double> he = h.apply(e);
  double top = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < d; ++i) {
    if (support[i]) top = std::max(top, he[i] / e[i]);
  }
  double lo = g.value, hi = top;
  std::vector<double> z_lo(d), z_hi = e;
  for (int i = 0; i < d; ++i) z_lo[i] = std::sqrt(s_star) * g.vector[i];
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    MultiplierResponse resp = response_at_multiplier(h, e, mid);
    res.iterations += resp.iterations;
    if (resp.s < t) {
      lo = mid;
      z_lo = resp.z;
    } else {
      hi = mid;
      z_hi = resp.z;
    }
  }
  // Pick the point on the segment z_lo -> z_hi with |z|^2 = t exactly.
  std::vector<double> dz(d);
  for (int i = 0; i < d; ++i) dz[i] = z_hi[i] - z_lo[i];
  double a = dot(dz, dz), b = 2.0 * dot(z_lo, dz), c = dot(z_lo, z_lo) - t;
  double theta = a > 0.0 ? (-b + std::sqrt(std::max(0.0, b * b - 4 * a * c))) / (2 * a) : 0.0;
  theta = std::clamp(theta, 0.0, 1.0);
  res.x.resize(d);
  for (int i = 0; i < d; ++i) res.x[i] = (z_lo[i] + theta * dz[i]) / std::sqrt(t);
  res.value = h.quadratic_form(res.x);
  res.multiplier = 0.5 * (lo + hi);
  return res;
}

}  // namespace

SymTridiagonal BlockProblem::hamiltonian() const {
  SymTridiagonal t;
  t.diag.assign(dim(), 2.0);
  t.off.resize(coupling.size());
  for (size_t i = 0; i < coupling.size(); ++i) t.off[i] = -coupling[i];
  return t;
}

BlockProblem block_hamiltonian(const SpinBlock& block, double r) {
  BlockProblem p;
  p.j = block.j;
  p.r = r;
  p.coupling = block.coupling;
  p.envelope.resize(block.diag.size());
  for (size_t i = 0; i < block.diag.size(); ++i) {
    p.envelope[i] = std::sqrt(std::max(0.0, block.diag[i]));
  }
  return p;
}

MultiplierResponse response_at_multiplier(const SymTridiagonal& h,
                                          std::span<const double> bound,
                                          double lambda) {
  int d = h.dim();
  std::vector<char> support = support_of(bound);
  MultiplierResponse out;
  out.z.assign(d, 0.0);

  bool above_ground = false;
  for (Run run : runs_of(support)) {
    if (sturm_count(sub_matrix(h, run), lambda) > 0) above_ground = true;
  }
  if (above_ground) {
    std::vector<char> pinned = support;
    for (int i = 0; i < d; ++i) out.z[i] = support[i] ? bound[i] : 0.0;
    for (;;) {
      std::vector<double> hz = h.apply(out.z);
      bool released = false;
      for (int i = 0; i < d; ++i) {
        if (!pinned[i]) continue;
        double q = hz[i] - lambda * out.z[i];
        double scale = std::abs(h.diag[i] - lambda) * out.z[i];
        if (i > 0) scale += std::abs(h.off[i - 1]) * out.z[i - 1];
        if (i + 1 < d) scale += std::abs(h.off[i]) * out.z[i + 1];
        if (q > 1e-13 * scale) {
          pinned[i] = 0;
          released = true;
        }
      }
      if (!released) break;
      ++out.iterations;
      std::vector<char> unpinned(d);
      for (int i = 0; i < d; ++i) unpinned[i] = support[i] && !pinned[i];
      std::vector<Run> runs = runs_of(unpinned);
      for (Run run : runs) {
        std::vector<double> b = boundary_rhs(h, run, out.z);
        std::vector<double> x;
        if (!solve_shifted_spd(sub_matrix(h, run), lambda, b, x)) {
          throw SolverError("fixed-multiplier solve lost definiteness at lambda=" +
                            std::to_string(lambda));
        }
        for (int i = run.begin; i < run.end; ++i) out.z[i] = x[i - run.begin];
      }
    }
  }
  out.s = dot(out.z, out.z);
  for (int i = 0; i + 1 < d; ++i) out.coherence -= h.off[i] * out.z[i] * out.z[i + 1];
  out.energy = h.quadratic_form(out.z);
  return out;
}

BoxSphereResult minimize_on_box_sphere(const SymTridiagonal& h,
                                       std::span<const double> upper,
                                       int max_iterations) {
  int d = h.dim();
  if (static_cast<int>(upper.size()) != d) throw DomainError("bound size mismatch");
  for (double u : upper) {
    if (!(u >= 0.0)) throw DomainError("bounds must be non-negative");
  }
  double u2 = dot(upper, upper);
  if (u2 < 1.0 - 1e-12) throw DomainError("box does not reach the unit sphere");
  std::vector<char> support = support_of(upper);
  if (u2 <= 1.0 + 1e-12) {
    BoxSphereResult res;
    res.x.assign(upper.begin(), upper.end());
    for (double& v : res.x) v /= std::sqrt(u2);
    std::vector<double> hx = h.apply(res.x);
    res.multiplier = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i) {
      if (support[i]) res.multiplier = std::max(res.multiplier, hx[i] / res.x[i]);
    }
    res.value = h.quadratic_form(res.x);
    return res;
  }
  if (max_iterations <= 0) max_iterations = 10 * d;
  if (auto res = active_set(h, upper, support, max_iterations)) return *res;
  return bisection_path(h, upper, support);
}

BlockSolution ground_state(const BlockProblem& problem) {
  SymTridiagonal h = problem.hamiltonian();
  Ground g = support_ground(h, support_of(problem.envelope));
  BlockSolution sol;
  sol.xi = g.vector;
  sol.sigma2 = h.quadratic_form(sol.xi);
  sol.multiplier = g.value;
  return sol;
}

double critical_probability(const BlockProblem& problem) {
  BlockSolution g = ground_state(problem);
  double s = 1.0;
  for (int i = 0; i < problem.dim(); ++i) {
    if (g.xi[i] > 0.0) {
      s = std::min(s, problem.envelope[i] * problem.envelope[i] / (g.xi[i] * g.xi[i]));
    }
  }
  return s;
}

BlockSolution constrained_minimize(const BlockProblem& problem, double s,
                                   const ConstrainedOptions& options) {
  if (!(s > 0.0 && s <= 1.0)) {
    throw DomainError("success probability must lie in (0, 1]");
  }
  int d = problem.dim();
  SymTridiagonal h = problem.hamiltonian();
  std::vector<double> upper(d);
  for (int i = 0; i < d; ++i) upper[i] = problem.envelope[i] / std::sqrt(s);
  BoxSphereResult res = minimize_on_box_sphere(h, upper, options.max_iterations);

  BlockSolution sol;
  sol.xi = res.x;
  sol.sigma2 = res.value;
  sol.multiplier = res.multiplier;
  sol.s = s;
  sol.iterations = res.iterations;
  sol.used_fallback = res.used_fallback;
  bool everything = dot(upper, upper) <= 1.0 + 1e-12;
  std::vector<double> hx = h.apply(sol.xi);
  for (int i = 0; i < d; ++i) {
    if (upper[i] <= 0.0) continue;
    if (everything) {
      sol.coincidence.push_back(i);
      continue;
    }
    bool at_bound = std::abs(sol.xi[i] - upper[i]) <= 1e-10 * upper[i];
    double mu = sol.multiplier * sol.xi[i] - hx[i];
    double tol = 1e-10 * (std::abs(sol.multiplier) * upper[i] + std::abs(hx[i]));
    if (at_bound && mu > tol) sol.coincidence.push_back(i);
  }
  // Outer band: the free sublevels form one interval with pins on both sides.
  if (!sol.coincidence.empty() && problem.j.twice() > 0 && !everything) {
    std::vector<char> pinned(d, 0);
    for (int i : sol.coincidence) pinned[i] = 1;
    std::vector<char> unpinned(d);
    for (int i = 0; i < d; ++i) unpinned[i] = upper[i] > 0.0 && !pinned[i];
    std::vector<Run> runs = runs_of(unpinned);
    bool band = runs.size() == 1 && runs[0].begin > 0 && runs[0].end < d;
    if (band) {
      for (int i = 0; i < d; ++i) {
        if (!unpinned[i] && (i < runs[0].begin || i >= runs[0].end) && !pinned[i] &&
            upper[i] > 0.0) {
          band = false;
        }
      }
    }
    if (band) {
      int best = problem.j.twice();
      for (int i : sol.coincidence) best = std::min(best, std::abs(problem.j.twice_m(i)));
      sol.x_c = static_cast<double>(best) / problem.j.twice();
    }
  }
  return sol;
}

double deterministic_block_precision(const BlockProblem& problem) {
  return problem.hamiltonian().quadratic_form(problem.envelope);
}

double deterministic_block_precision(const SpinBlock& block) {
  return 2.0 - 2.0 * std::accumulate(block.offdiag.begin(), block.offdiag.end(), 0.0);
}

const BlockFilter* FilterProfile::find(Spin j) const {
  for (const BlockFilter& b : blocks) {
    if (b.j == j) return &b;
  }
  return nullptr;
}

BlockFilter filter_from_solution(const BlockProblem& problem,
                                 const BlockSolution& solution) {
  int d = problem.dim();
  double s = 1.0;
  if (solution.s) {
    s = *solution.s;
  } else {
    for (int i = 0; i < d; ++i) {
      if (solution.xi[i] > 0.0) {
        s = std::min(s, problem.envelope[i] * problem.envelope[i] /
                            (solution.xi[i] * solution.xi[i]));
      }
    }
  }
  BlockFilter f;
  f.j = problem.j;
  f.f.assign(d, 0.0);
  for (int i = 0; i < d; ++i) {
    if (problem.envelope[i] > 0.0) {
      f.f[i] = std::clamp(solution.xi[i] * std::sqrt(s) / problem.envelope[i], 0.0, 1.0);
    }
  }
  return f;
}

BlockFilter complementary_filter(const BlockFilter& filter) {
  BlockFilter out{filter.j, filter.f};
  for (double& v : out.f) v = std::sqrt(std::max(0.0, 1.0 - v * v));
  return out;
}

FilterProfile complementary_filter(const FilterProfile& profile) {
  FilterProfile out;
  for (const BlockFilter& b : profile.blocks) out.blocks.push_back(complementary_filter(b));
  return out;
}

double filter_success(const SpinBlock& block, const BlockFilter& filter) {
  double acc = 0.0;
  for (size_t i = 0; i < block.diag.size(); ++i) acc += filter.f[i] * filter.f[i] * block.diag[i];
  return acc;
}

double filter_coherence(const SpinBlock& block, const BlockFilter& filter) {
  double acc = 0.0;
  for (size_t i = 0; i < block.offdiag.size(); ++i) {
    acc += filter.f[i] * filter.f[i + 1] * block.offdiag[i];
  }
  return acc;
}

}  // namespace probmetro
