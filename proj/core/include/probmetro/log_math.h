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

#ifndef PROBMETRO_LOG_MATH_H
#define PROBMETRO_LOG_MATH_H

#include <limits>
#include <span>
#include <vector>

namespace probmetro {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ln C(n, k) via lgamma. Throws DomainError outside 0 <= k <= n.
double log_binomial(int n, int k);

// ln k! for 0 <= k <= capacity, filled with lgamma so entries do not drift.
class LogFactorials {
 public:
  explicit LogFactorials(int capacity);
  double operator()(int k) const { return table_[k]; }
  int capacity() const { return static_cast<int>(table_.size()) - 1; }

 private:
  std::vector<double> table_;
};

// ln(sum exp(terms)); -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> terms);

// ln(exp(a) + exp(b)).
double log_add_exp(double a, double b);

}  // namespace probmetro

#endif  // PROBMETRO_LOG_MATH_H
