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
#ifndef PROBMETRO_TRIDIAGONAL_H
#define PROBMETRO_TRIDIAGONAL_H

#include <span>
#include <vector>

namespace probmetro {

// Real symmetric tridiagonal matrix.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // size diag.size() - 1

  int dim() const { return static_cast<int>(diag.size()); }
  std::vector<double> apply(std::span<const double> x) const;
  double quadratic_form(std::span<const double> x) const;
};

// Number of eigenvalues strictly below x.
int sturm_count(const SymTridiagonal& t, double x);

// k-th smallest eigenvalue (k = 0 is the minimum) by bisection,
// resolved to a few ulps.
double eigenvalue_by_bisection(const SymTridiagonal& t, int k);

struct Eigenpair {
  double value = 0.0;
  std::vector<double> vector;  // unit norm, sign chosen so the sum is >= 0
};

// Lowest eigenpair: bisection plus inverse iteration, with a dense
// fallback for small matrices when inverse iteration stalls.
Eigenpair lowest_eigenpair(const SymTridiagonal& t);

// Solves (T - shift) x = rhs by LDL^T. Returns false if a pivot is <= 0,
// i.e. T - shift is not positive definite.
bool solve_shifted_spd(const SymTridiagonal& t, double shift,
                       std::span<const double> rhs, std::vector<double>& x);

}  // namespace probmetro

#endif  // PROBMETRO_TRIDIAGONAL_H
