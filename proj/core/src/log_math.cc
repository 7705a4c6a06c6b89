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
#include "probmetro/log_math.h"

#include <algorithm>
#include <cmath>

#include "probmetro/errors.h"

namespace probmetro {

double log_binomial(int n, int k) {
  if (n < 0) throw DomainError("log_binomial: negative n");
  if (k < 0 || k > n) throw DomainError("log_binomial: k outside [0, n]");
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

LogFactorials::LogFactorials(int capacity) {
  if (capacity < 0) throw DomainError("LogFactorials: negative capacity");
  table_.resize(static_cast<size_t>(capacity) + 1);
  for (int k = 0; k <= capacity; ++k) table_[k] = std::lgamma(k + 1.0);
}

double log_sum_exp(std::span<const double> terms) {
  double top = kNegInf;
  for (double t : terms) top = std::max(top, t);
  if (top == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - top);
  return top + std::log(acc);
}

double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace probmetro
