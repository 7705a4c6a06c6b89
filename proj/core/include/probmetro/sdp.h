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
#ifndef PROBMETRO_SDP_H
#define PROBMETRO_SDP_H

#include <vector>

#include <Eigen/Dense>

#include "probmetro/filter_solver.h"
#include "probmetro/spin_blocks.h"

namespace probmetro {

struct SdpOptions {
  double gap_tolerance = 1e-10;          // relative duality gap
  double feasibility_tolerance = 1e-10;  // relative residuals
  int max_iterations = 200;
  int dim_cap = 2000;             // total number of matrix rows
  double rank_tolerance = 1e-6;   // on the second eigenvalue of each block
};

struct SdpBlockResult {
  Spin j;
  Eigen::MatrixXd lambda;  // full 2j+1 square, zero rows where rho_mm = 0
  double second_eigenvalue = 0.0;
  bool rank_one = true;
};

// Relaxation over block matrices Lambda^j >= 0:
//   min sum tr(H^j Lambda^j)  s.t.  sum tr Lambda^j = 1,
//   Lambda^j_mm <= p_j rho^j_mm / S.
// When the caps sum to one the bounds become equalities.
struct SdpSolution {
  double objective = 0.0;  // equals sigma^2
  double dual_objective = 0.0;
  double duality_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  bool equality_form = false;
  bool stalled = false;  // stopped within 100x gap_tolerance, gap no longer shrinking
  std::vector<SdpBlockResult> blocks;
  FilterProfile filter;  // f = min(1, sqrt(S Lambda_mm / (p rho_mm)))
};

SdpSolution sdp_solve(const BlockDecomposition& decomposition, double S,
                      const SdpOptions& options = {});

}  // namespace probmetro

#endif  // PROBMETRO_SDP_H
