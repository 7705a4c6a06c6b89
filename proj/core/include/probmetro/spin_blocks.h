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
#ifndef PROBMETRO_SPIN_BLOCKS_H
#define PROBMETRO_SPIN_BLOCKS_H

#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "probmetro/spin.h"

namespace probmetro {

using BigInt = boost::multiprecision::cpp_int;

// Independent dephasing of every qubit: off-diagonals shrink by r.
class NoiseModel {
 public:
  static NoiseModel FromStrength(double r);
  // p_flip = (1 - r) / 2, valid on [0, 1/2].
  static NoiseModel FromFlipProbability(double p_flip);

  double r() const { return r_; }
  double flip_probability() const { return 0.5 * (1.0 - r_); }

 private:
  explicit NoiseModel(double r) : r_(r) {}
  double r_;
};

enum class ProbeKind { kMulticopy, kCustom };

// Permutation-symmetric probe sum_m c_m |J, m>, amplitudes stored for
// m = J, J-1, ..., -J (index beta = J - m counts flipped qubits).
class ProbeSpec {
 public:
  static ProbeSpec Multicopy(int n);
  // Amplitudes must be non-negative and normalized to 1e-9.
  static ProbeSpec Custom(int n, std::vector<double> amplitudes);

  int n() const { return n_; }
  ProbeKind kind() const { return kind_; }
  Spin max_spin() const { return Spin::MaxForQubits(n_); }
  const std::vector<double>& amplitudes() const { return amplitudes_; }
  // ln c_beta, -inf where the amplitude vanishes.
  const std::vector<double>& log_amplitudes() const { return log_amplitudes_; }

 private:
  ProbeSpec() = default;
  int n_ = 0;
  ProbeKind kind_ = ProbeKind::kCustom;
  std::vector<double> amplitudes_;
  std::vector<double> log_amplitudes_;
};

// One irreducible block rho^j. Vectors are indexed by m = -j..j.
struct SpinBlock {
  Spin j;
  double probability = 0.0;
  BigInt multiplicity;
  double log_multiplicity = 0.0;
  std::vector<double> diag;     // rho_{m,m}, sums to 1
  std::vector<double> offdiag;  // rho_{m,m+1}, m = -j..j-1
  // a_m = D_{m,m+1} / sqrt(D_{m,m} D_{m+1,m+1}); depends on the noise only.
  std::vector<double> coupling;
};

struct BlockDecomposition {
  int n = 0;
  double r = 1.0;
  std::vector<SpinBlock> blocks;  // descending j

  // nullptr when the block was dropped (probe has no weight there).
  const SpinBlock* find(Spin j) const;
};

struct DecomposeOptions {
  int threads = 1;
};

BlockDecomposition decompose(const ProbeSpec& probe, const NoiseModel& noise,
                             const DecomposeOptions& options = {});

// nu_j = C(n, J-j) (2j+1) / (J+j+1), exact.
BigInt block_multiplicity(int n, Spin j);

// ln Delta_k(j, m, m'); empty when a factorial argument is negative.
std::optional<double> log_wigner_delta(Spin j, int twice_m, int twice_mp, int k);
double wigner_delta(Spin j, int twice_m, int twice_mp, int k);

// ln of r^{m-m'} sum_k Delta_k r^{2k} for the ordered pair m >= m'
// (arguments are swapped otherwise). The (1-r^2)^{J-j} prefactor is left out.
double log_dephasing_core(Spin j, int twice_m, int twice_mp, double r);

// D^j_{m',m} including (1-r^2)^{J-j}.
double dephasing_entry(Spin J, Spin j, int twice_mp, int twice_m, double r);

struct MulticopySums {
  double diag_sum;     // sum_m D^j_{m,m}
  double probability;  // p_j for the product probe
};
MulticopySums multicopy_block_sums(int n, Spin j, double r);

// Dense rho^j, unit trace. Throws SizeError above dim_cap sublevels.
Eigen::MatrixXd full_block_matrix(const ProbeSpec& probe,
                                  const NoiseModel& noise, Spin j,
                                  int dim_cap = 512);

}  // namespace probmetro

#endif  // PROBMETRO_SPIN_BLOCKS_H
