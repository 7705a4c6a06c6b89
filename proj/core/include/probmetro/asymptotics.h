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
#ifndef PROBMETRO_ASYMPTOTICS_H
#define PROBMETRO_ASYMPTOTICS_H

#include <optional>
#include <vector>

#include "probmetro/filter_solver.h"
#include "probmetro/spin.h"
#include "probmetro/spin_blocks.h"

namespace probmetro {

// Continuum potential V(x) = j(1-r^2) / (2r sqrt(1 - (1-r^2) x^2)).
// +inf where (1-r^2) x^2 >= 1.
double potential(Spin j, double r, double x);

struct PotentialModel {
  Spin j;
  double r;
  double v0;      // j(1-r^2)/(2r)
  double omega2;  // j(1-r^2)^2/(4r)
  double operator()(double x) const { return potential(j, r, x); }
};
PotentialModel potential_model(Spin j, double r);

struct ContinuumDeviation {
  double max_relative_deviation = 0.0;
  double max_absolute_deviation = 0.0;
  int samples = 0;
};
// 2 j^2 (1 - a_m) against V(m/j) for |m/j| <= x_max.
ContinuumDeviation discrete_to_continuum_check(const BlockProblem& block,
                                               double x_max = 0.8);

struct ContinuumConstraint {
  std::vector<double> phi_tilde;  // envelope on the interior grid nodes
  double s = 1.0;
};

struct ContinuumProfile {
  std::vector<double> grid;  // interior nodes, spacing h = 2/(N+1)
  std::vector<double> phi;   // int phi^2 dx = 1
  std::vector<double> phi_tilde;
  double energy = 0.0;  // <phi| -d2/dx2 + V |phi>
  double sigma2 = 0.0;  // energy / j^2
  std::vector<int> coincidence;
  std::optional<double> x_c;
};

std::vector<double> continuum_grid(int points);

// Finite differences on [-1, 1] with phi(+-1) = 0. points >= 200.
ContinuumProfile continuum_ground(Spin j, double r, int points = 400,
                                  const std::optional<ContinuumConstraint>& constraint = {});

// Envelope of the product probe at spin j: (jr/pi)^{1/4} exp(-r j x^2 / 2).
std::vector<double> gaussian_envelope(Spin j, double r,
                                      const std::vector<double>& grid);

double sigma_det_asymptotic(int n, double r);

struct UltimateBound {
  double sigma2 = 0.0;
  bool degenerate = false;  // r = 1: the formula collapses, use pi^2/n^2
};
UltimateBound sigma_ult(int n, double r);

// (1 - r^2 S_bar / 2) / (n r^2).
double sigma_finite_s(int n, double r, double s_bar);
// (1-r^2)/(n r^2) + r sigma2_pure(S), sigma2_pure from the noiseless
// solver at n_eff = round(n r).
double sigma_finite_s_first_form(int n, double r, double s_bar);

double sigma_opt_det(int n, double r);

// Gaussian amplitudes exp(-sqrt(n(1-r^2)) y^2 / (4r)), y = m/J.
ProbeSpec optimal_probe_asymptotic(int n, double r);
// cos(m pi/(n+2)) exp(-sqrt((1-r^2)/(r^2 n^3)) m^2).
ProbeSpec conjectured_probe(int n, double r);

// sum_m c_m c'_m over the shared ladder.
double probe_overlap(const ProbeSpec& a, const ProbeSpec& b);

struct ScalingExponents {
  double log_p_J;             // -n (ln 2 - ln(1+r))
  double log_s_star_j;        // -2 j ln(1+r)
  double log_S_star_maxblock;  // -n ln 2
};
ScalingExponents scaling_laws(int n, Spin j, double r);

// Typical spin r J rounded to the nearest spin allowed for n qubits.
Spin typical_spin(int n, double r);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace probmetro

#endif  // PROBMETRO_ASYMPTOTICS_H
