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
#ifndef PROBMETRO_FILTER_SOLVER_H
#define PROBMETRO_FILTER_SOLVER_H

#include <optional>
#include <span>
#include <vector>

#include "probmetro/spin.h"
#include "probmetro/spin_blocks.h"
#include "probmetro/tridiagonal.h"

namespace probmetro {

// Per-block precision problem: minimize <xi|H|xi> with H = 2 - a (hopping),
// |xi| = 1 and 0 <= xi_m <= envelope_m / sqrt(s).
struct BlockProblem {
  Spin j;
  double r = 1.0;
  std::vector<double> coupling;  // a_m, size 2j
  std::vector<double> envelope;  // sqrt(rho_mm), size 2j+1, unit norm

  SymTridiagonal hamiltonian() const;
  int dim() const { return j.dim(); }
};

BlockProblem block_hamiltonian(const SpinBlock& block, double r);

struct BlockSolution {
  std::vector<double> xi;
  double sigma2 = 0.0;     // <xi|H|xi>
  double multiplier = 0.0;  // lambda of the norm constraint
  std::optional<double> s;  // constraint level, empty for the ground state
  std::vector<int> coincidence;  // sublevel indices with xi = envelope/sqrt(s)
  std::optional<double> x_c;     // set when the coincidence set is an outer band
  int iterations = 0;
  bool used_fallback = false;
};

// Unconstrained minimum: lowest eigenpair of H, non-negative vector.
BlockSolution ground_state(const BlockProblem& problem);

// s*_j = min_m rho_mm / xi0_m^2: largest s for which the ground state
// already satisfies the bound.
double critical_probability(const BlockProblem& problem);

struct ConstrainedOptions {
  int max_iterations = 0;  // 0 means 10 * dim
};

// Active-set solve at fixed 0 < s <= 1.
BlockSolution constrained_minimize(const BlockProblem& problem, double s,
                                   const ConstrainedOptions& options = {});

// sigma^2 of the trivial filter f = 1, as <envelope|H|envelope>.
double deterministic_block_precision(const BlockProblem& problem);
// Same quantity from the block coherences, 2 - 2 sum rho_{m,m+1}.
double deterministic_block_precision(const SpinBlock& block);

// Fixed-multiplier response: z minimizes z (H - lambda) z over 0 <= z <= bound.
// s = |z|^2, coherence = -sum off_m z_m z_{m+1}, energy = z H z.
struct MultiplierResponse {
  std::vector<double> z;
  double s = 0.0;
  double coherence = 0.0;
  double energy = 0.0;
  int iterations = 0;
};
MultiplierResponse response_at_multiplier(const SymTridiagonal& h,
                                          std::span<const double> bound,
                                          double lambda);

// Generic box-sphere minimization for a tridiagonal Z-matrix:
// min x H x over |x| = 1, 0 <= x <= upper. Needs |upper| >= 1.
struct BoxSphereResult {
  std::vector<double> x;
  double value = 0.0;
  double multiplier = 0.0;
  int iterations = 0;
  bool used_fallback = false;
};
BoxSphereResult minimize_on_box_sphere(const SymTridiagonal& h,
                                       std::span<const double> upper,
                                       int max_iterations = 0);

struct BlockFilter {
  Spin j;
  std::vector<double> f;  // 0 <= f_m <= 1, m = -j..j
};

struct FilterProfile {
  std::vector<BlockFilter> blocks;
  const BlockFilter* find(Spin j) const;
};

// f_m = xi_m sqrt(s) / envelope_m, clipped to [0, 1].
BlockFilter filter_from_solution(const BlockProblem& problem,
                                 const BlockSolution& solution);
// sqrt(1 - f^2): the measurement that fires on failure.
BlockFilter complementary_filter(const BlockFilter& filter);
FilterProfile complementary_filter(const FilterProfile& profile);

// sum f^2 rho_mm and sum f f' rho_{m,m+1} for one block.
double filter_success(const SpinBlock& block, const BlockFilter& filter);
double filter_coherence(const SpinBlock& block, const BlockFilter& filter);

}  // namespace probmetro

#endif  // PROBMETRO_FILTER_SOLVER_H
