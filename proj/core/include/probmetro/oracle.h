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
#ifndef PROBMETRO_ORACLE_H
#define PROBMETRO_ORACLE_H

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "probmetro/filter_solver.h"
#include "probmetro/spin_blocks.h"

namespace probmetro {

// Brute-force checks in the 2^n computational basis. Bit k of b set means
// qubit k is in |1>, and m = J - |b|.
inline constexpr int kOracleMaxQubits = 12;

struct DenseState {
  int n = 0;
  Eigen::MatrixXd matrix;
};

struct DenseSeed {
  int n = 0;
  Eigen::MatrixXd matrix;
  // Phase average of the seed; a valid covariant POVM needs 0 <= it <= 1.
  Eigen::MatrixXd twirled() const;
};

// psi_b = c_m / sqrt(C(n, |b|)).
std::vector<double> symmetric_amplitudes(const ProbeSpec& probe);

// rho_bb' = r^{Hamming(b, b')} psi_b psi_b'.
DenseState dense_dephase(std::span<const double> amplitudes, double r);
// Entrywise dephasing of an arbitrary operator.
Eigen::MatrixXcd dephase_matrix(const Eigen::MatrixXcd& rho, double r);
// U rho U^dag with U = exp(i theta N), N the number of 1-bits.
Eigen::MatrixXcd phase_rotate(const Eigen::MatrixXcd& rho, double theta);

// Orthonormal |j, m, alpha> vectors built from highest weights by lowering.
struct SpinBasis {
  struct Block {
    Spin j;
    std::vector<Eigen::MatrixXd> levels;  // levels[i]: 2^n x nu_j, m = -j + i
  };
  int n = 0;
  std::vector<Block> blocks;  // descending j
};
SpinBasis build_spin_basis(int n);

struct ProjectedBlock {
  Spin j;
  double p = 0.0;
  Eigen::MatrixXd rho;  // unit trace; zero if p = 0
};
std::vector<ProjectedBlock> project_onto_blocks(const DenseState& state,
                                                const SpinBasis& basis);

// Omega = sum_j sum_alpha |chi><chi|, chi = sum_m f_m |j, m, alpha>.
DenseSeed seed_from_filter(const FilterProfile& profile, const SpinBasis& basis);

struct DirectFidelity {
  double F = 0.0;
  double S = 0.0;
};
DirectFidelity direct_fidelity(const DenseState& state, const DenseSeed& seed);

struct ThetaScan {
  double F_worst = 0.0;
  double F_avg = 0.0;
};
// Trapezoidal scan of the conditional fidelity over the true phase.
// weight multiplies each estimate's POVM element; empty means covariant.
ThetaScan theta_scan(const DenseState& state, const DenseSeed& seed,
                     int theta_points = 512, int estimate_points = 512,
                     const std::function<double(double)>& weight = {});

struct ExhaustiveSearch {
  double best_random = 0.0;   // best over the random starts only
  double best_overall = 0.0;  // also seeded with the given start
  int starts = 0;
};
// Multi-start pairwise-rotation search over the sphere-box intersection.
ExhaustiveSearch exhaustive_filter_search(
    const BlockProblem& problem, double s, int resolution = 64,
    std::uint64_t seed = 1, int random_starts = 200,
    const std::optional<std::vector<double>>& extra_start = {});

struct SymmetrizationReport {
  int trials = 0;
  double max_delta_difference = 0.0;
  double max_success_difference = 0.0;
};
// Random non-symmetric probes and seeds against their symmetrized pair.
SymmetrizationReport symmetric_optimality_probe_check(int n, double r, int trials,
                                                      std::uint64_t seed = 1);

struct VerificationCheck {
  std::string name;
  double value = 0.0;      // worst observed discrepancy
  double tolerance = 0.0;
  double margin = 0.0;     // tolerance - value
  bool passed = true;
  std::string worst_case;  // parameters where the worst value occurred
  int cases = 0;
};

struct VerificationOptions {
  int n_max = 4;
  std::vector<double> r_values{0.2, 0.5, 0.8, 1.0};
  std::vector<double> S_values{0.3, 0.7, 1.0};
  std::uint64_t seed = 1;
  // Test hook: perturbs the named check so that it must fail.
  std::string inject_fault;
};

struct VerificationReport {
  std::vector<VerificationCheck> checks;
  bool all_passed() const;
};

// Cross-checks every block-formula result against the dense oracle.
VerificationReport run_verification(const VerificationOptions& options = {});

}  // namespace probmetro

#endif  // PROBMETRO_ORACLE_H
