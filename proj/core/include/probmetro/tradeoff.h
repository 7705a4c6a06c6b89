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
#ifndef PROBMETRO_TRADEOFF_H
#define PROBMETRO_TRADEOFF_H

#include <optional>
#include <string>
#include <vector>

#include "probmetro/filter_solver.h"
#include "probmetro/spin_blocks.h"

namespace probmetro {

struct BlockAllocation {
  Spin j;
  double p = 0.0;
  double s = 0.0;          // per-block success probability
  double coherence = 0.0;  // sum f f' rho_{m,m+1}, times s is the block share
  double sigma2 = 0.0;     // 2 - 2 coherence / s; nan for a dropped block
  double multiplier = 0.0;
};

struct TradeoffPoint {
  double S = 1.0;
  double S_bar = 0.0;
  double F = 1.0;
  double sigma2 = 0.0;
  double multiplier = 0.0;  // common lambda of the interior blocks
  std::vector<BlockAllocation> blocks;
  FilterProfile filter;
};

enum class CriticalMode { kPerBlock, kMaxBlock };

struct TradeoffOptions {
  int threads = 1;
};

// Precomputes the per-block spectral data once; solve() is then cheap.
class TradeoffSolver {
 public:
  explicit TradeoffSolver(const BlockDecomposition& decomposition);

  // Optimal filter profile at overall success S in (0, 1].
  TradeoffPoint solve(double S) const;
  // Sum p_j s*_j, or p_J s*_J of the largest block.
  double critical_success(CriticalMode mode) const;

  struct BlockModel {
    const SpinBlock* block;
    BlockProblem problem;
    SymTridiagonal h;
    double ground_energy;
    std::vector<double> ground;
    double s_star;
    double lambda_full;  // beyond this every bound is active, s = 1
  };
  const std::vector<BlockModel>& models() const { return models_; }

 private:
  struct Response {
    std::vector<std::vector<double>> z;  // per model
    double total = 0.0;                  // sum p_j |z_j|^2
  };
  enum class Side { kLeft, kRight };
  Response evaluate(double lambda, Side side) const;
  TradeoffPoint assemble(double S, double lambda,
                         const std::vector<std::vector<double>>& z) const;

  const BlockDecomposition& decomposition_;
  std::vector<BlockModel> models_;
};

TradeoffPoint global_tradeoff(const BlockDecomposition& decomposition,
                              double S);
double critical_success(const BlockDecomposition& decomposition,
                        CriticalMode mode);

// Grid of S_bar values in [0, 1), ascending. Accepted terms, joined by '+':
//   default | default:N | uniform:N | uniform:N:lo:hi | geom:N:Smin:Smax |
//   list:v1,v2,...
std::vector<double> parse_s_grid(const std::string& text);
std::vector<double> default_s_grid(int points = 64);

std::vector<TradeoffPoint> tradeoff_curve(const BlockDecomposition& decomposition,
                                          const std::vector<double>& s_bar_grid,
                                          const TradeoffOptions& options = {});

struct GentleCheck {
  bool holds = true;
  double margin = 0.0;  // sqrt(2) S - (F_det - F_fail)
};
GentleCheck gentle_bound_check(double F_det, double F_fail, double S);

struct ScavengeReport {
  double S = 1.0;
  double sigma2_success = 0.0;
  std::optional<double> sigma2_fail;  // empty when S = 1
  double sigma2_all = 0.0;
  double sigma2_det = 0.0;
  double F_success = 1.0;
  std::optional<double> F_fail;
  double F_all = 1.0;
  double F_det = 1.0;
  GentleCheck gentle;
};

// Keeps the failure branch, estimating with the complementary filter.
ScavengeReport scavenged_precision(const BlockDecomposition& decomposition,
                                   double S, const FilterProfile& profile);

}  // namespace probmetro

#endif  // PROBMETRO_TRADEOFF_H
