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
#include "probmetro/asymptotics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "probmetro/errors.h"
#include "probmetro/tradeoff.h"

namespace probmetro {
namespace {

void require_open_r(double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("formula needs 0 < r < 1");
}

void require_positive_r(double r) {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("formula needs 0 < r <= 1");
}

void require_n(int n) {
  if (n < 1) throw DomainError("n must be positive");
}

ProbeSpec normalized_probe(int n, std::vector<double> c) {
  double norm = std::sqrt(std::inner_product(c.begin(), c.end(), c.begin(), 0.0));
  for (double& v : c) v /= norm;
  return ProbeSpec::Custom(n, std::move(c));
}

}  // namespace

double potential(Spin j, double r, double x) {
  require_positive_r(r);
  if (std::abs(x) > 1.0) throw DomainError("potential defined on [-1, 1]");
  if (r == 1.0) return 0.0;
  double q = 1.0 - (1.0 - r * r) * x * x;
  if (q <= 0.0) return std::numeric_limits<double>::infinity();
  return j.value() * (1.0 - r * r) / (2.0 * r * std::sqrt(q));
}

PotentialModel potential_model(Spin j, double r) {
  require_positive_r(r);
  double g = 1.0 - r * r;
  return {j, r, j.value() * g / (2.0 * r), j.value() * g * g / (4.0 * r)};
}

ContinuumDeviation discrete_to_continuum_check(const BlockProblem& block,
                                               double x_max) {
  ContinuumDeviation out;
  double jv = block.j.value();
  if (jv <= 0.0) return out;
  for (size_t i = 0; i < block.coupling.size(); ++i) {
    double x = block.j.twice_m(static_cast<int>(i)) / (2.0 * jv);
    if (std::abs(x) > x_max) continue;
    double discrete = 2.0 * jv * jv * (1.0 - block.coupling[i]);
    double cont = potential(block.j, block.r, x);
    double diff = std::abs(discrete - cont);
    out.max_absolute_deviation = std::max(out.max_absolute_deviation, diff);
    if (cont > 0.0) {
      out.max_relative_deviation = std::max(out.max_relative_deviation, diff / cont);
    } else if (diff > 0.0) {
      out.max_relative_deviation = std::numeric_limits<double>::infinity();
    }
    ++out.samples;
  }
  return out;
}

std::vector<double> continuum_grid(int points) {
  std::vector<double> g(points);
  double h = 2.0 / (points + 1);
  for (int i = 0; i < points; ++i) g[i] = -1.0 + (i + 1) * h;
  return g;
}

std::vector<double> gaussian_envelope(Spin j, double r,
                                      const std::vector<double>& grid) {
  require_positive_r(r);
  double jr = j.value() * r;
  std::vector<double> out(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    out[i] = std::pow(jr / std::numbers::pi, 0.25) * std::exp(-0.5 * jr * grid[i] * grid[i]);
  }
  return out;
}

ContinuumProfile continuum_ground(Spin j, double r, int points,
                                  const std::optional<ContinuumConstraint>& constraint) {
  require_positive_r(r);
  if (points < 200) throw DomainError("continuum grid needs at least 200 points");
  ContinuumProfile prof;
  prof.grid = continuum_grid(points);
  double h = 2.0 / (points + 1);
  SymTridiagonal t;
  t.diag.resize(points);
  t.off.assign(points - 1, -1.0 / (h * h));
  for (int i = 0; i < points; ++i) {
    t.diag[i] = 2.0 / (h * h) + potential(j, r, prof.grid[i]);
  }
  std::vector<double> psi;
  if (!constraint) {
    psi = lowest_eigenpair(t).vector;
  } else {
    if (static_cast<int>(constraint->phi_tilde.size()) != points) {
      throw DomainError("envelope must be sampled on the continuum grid");
    }
    if (!(constraint->s > 0.0 && constraint->s <= 1.0)) {
      throw DomainError("success probability must lie in (0, 1]");
    }
    prof.phi_tilde = constraint->phi_tilde;
    double norm2 = 0.0;
    for (double v : prof.phi_tilde) norm2 += h * v * v;
    for (double& v : prof.phi_tilde) v /= std::sqrt(norm2);
    std::vector<double> upper(points);
    for (int i = 0; i < points; ++i) {
      upper[i] = std::sqrt(h / constraint->s) * prof.phi_tilde[i];
    }
    BoxSphereResult res = minimize_on_box_sphere(t, upper);
    psi = res.x;
    std::vector<double> hx = t.apply(psi);
    for (int i = 0; i < points; ++i) {
      bool at_bound = std::abs(psi[i] - upper[i]) <= 1e-10 * upper[i];
      double mu = res.multiplier * psi[i] - hx[i];
      double tol = 1e-10 * (std::abs(res.multiplier) * upper[i] + std::abs(hx[i]));
      if (upper[i] > 0.0 && at_bound && mu > tol) prof.coincidence.push_back(i);
    }
    if (!prof.coincidence.empty()) {
      double best = std::numeric_limits<double>::infinity();
      for (int i : prof.coincidence) best = std::min(best, std::abs(prof.grid[i]));
      prof.x_c = best;
    }
  }
  prof.energy = t.quadratic_form(psi);
  prof.sigma2 = prof.energy / (j.value() * j.value());
  prof.phi.resize(points);
  for (int i = 0; i < points; ++i) prof.phi[i] = psi[i] / std::sqrt(h);
  return prof;
}

double sigma_det_asymptotic(int n, double r) {
  require_n(n);
  require_positive_r(r);
  return 1.0 / (n * r * r);
}

UltimateBound sigma_ult(int n, double r) {
  require_n(n);
  require_positive_r(r);
  if (r == 1.0) return {0.0, true};
  return {(1.0 - r * r) / (n * r) * (1.0 + std::sqrt(2.0 * r / n)), false};
}

double sigma_finite_s(int n, double r, double s_bar) {
  require_n(n);
  require_positive_r(r);
  if (!(s_bar >= 0.0 && s_bar < 1.0)) throw DomainError("S_bar must lie in [0, 1)");
  return (1.0 - 0.5 * r * r * s_bar) / (n * r * r);
}

double sigma_finite_s_first_form(int n, double r, double s_bar) {
  require_n(n);
  require_positive_r(r);
  if (!(s_bar >= 0.0 && s_bar < 1.0)) throw DomainError("S_bar must lie in [0, 1)");
  int n_eff = std::max(1, static_cast<int>(std::lround(n * r)));
  BlockDecomposition pure =
      decompose(ProbeSpec::Multicopy(n_eff), NoiseModel::FromStrength(1.0));
  double sigma2_pure = global_tradeoff(pure, 1.0 - s_bar).sigma2;
  return (1.0 - r * r) / (n * r * r) + r * sigma2_pure;
}

double sigma_opt_det(int n, double r) {
  require_n(n);
  require_open_r(r);
  double g = 1.0 - r * r;
  return g / (n * r * r) + 2.0 * std::sqrt(g) / (std::pow(n, 1.5) * r);
}

ProbeSpec optimal_probe_asymptotic(int n, double r) {
  require_n(n);
  require_open_r(r);
  double width = std::sqrt(n * (1.0 - r * r)) / (4.0 * r);
  double J = 0.5 * n;
  std::vector<double> c(n + 1);
  for (int beta = 0; beta <= n; ++beta) {
    double y = (J - beta) / J;
    c[beta] = std::exp(-width * y * y);
  }
  return normalized_probe(n, std::move(c));
}

ProbeSpec conjectured_probe(int n, double r) {
  require_n(n);
  require_positive_r(r);
  double k = std::sqrt((1.0 - r * r) / (r * r * std::pow(n, 3.0)));
  double J = 0.5 * n;
  std::vector<double> c(n + 1);
  for (int beta = 0; beta <= n; ++beta) {
    double m = J - beta;
    c[beta] = std::cos(m * std::numbers::pi / (n + 2)) * std::exp(-k * m * m);
  }
  return normalized_probe(n, std::move(c));
}

double probe_overlap(const ProbeSpec& a, const ProbeSpec& b) {
  if (a.n() != b.n()) throw DomainError("probes act on different qubit counts");
  return std::inner_product(a.amplitudes().begin(), a.amplitudes().end(),
                            b.amplitudes().begin(), 0.0);
}

ScalingExponents scaling_laws(int n, Spin j, double r) {
  require_n(n);
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("r must lie in [0, 1]");
  double l1r = std::log1p(r);
  return {-n * (std::numbers::ln2 - l1r), -2.0 * j.value() * l1r, -n * std::numbers::ln2};
}

Spin typical_spin(int n, double r) {
  require_n(n);
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("r must lie in [0, 1]");
  int parity = n % 2;
  int k = static_cast<int>(std::lround((r * n - parity) / 2.0));
  int tj = std::clamp(2 * k + parity, parity, n);
  return Spin::FromTwice(tj);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("need two or more points");
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace probmetro
