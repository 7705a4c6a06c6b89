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
#include "probmetro/tridiagonal.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "probmetro/errors.h"

namespace probmetro {

std::vector<double> SymTridiagonal::apply(std::span<const double> x) const {
  int d = dim();
  std::vector<double> y(d);
  for (int i = 0; i < d; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += off[i - 1] * x[i - 1];
    if (i + 1 < d) v += off[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

double SymTridiagonal::quadratic_form(std::span<const double> x) const {
  double acc = 0.0;
  for (int i = 0; i < dim(); ++i) {
    acc += diag[i] * x[i] * x[i];
    if (i + 1 < dim()) acc += 2.0 * off[i] * x[i] * x[i + 1];
  }
  return acc;
}

int sturm_count(const SymTridiagonal& t, double x) {
  constexpr double kTiny = 1e-300;
  int count = 0;
  double q = 1.0;
  for (int i = 0; i < t.dim(); ++i) {
    double e2 = i > 0 ? t.off[i - 1] * t.off[i - 1] : 0.0;
    q = (t.diag[i] - x) - (i > 0 ? e2 / q : 0.0);
    if (q == 0.0) q = -kTiny;
    if (q < 0.0) ++count;
  }
  return count;
}

double eigenvalue_by_bisection(const SymTridiagonal& t, int k) {
  int d = t.dim();
  if (d == 0 || k < 0 || k >= d) throw DomainError("eigenvalue index out of range");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < d; ++i) {
    double rad = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) +
                 (i + 1 < d ? std::abs(t.off[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - rad);
    hi = std::max(hi, t.diag[i] + rad);
  }
  double span = std::max(hi - lo, 1.0);
  lo -= 1e-12 * span;
  hi += 1e-12 * span;
  // Invariant: count(lo) <= k < count(hi).
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(t, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool solve_shifted_spd(const SymTridiagonal& t, double shift,
                       std::span<const double> rhs, std::vector<double>& x) {
  int d = t.dim();
  std::vector<double> piv(d), l(std::max(d - 1, 0));
  x.assign(rhs.begin(), rhs.end());
  for (int i = 0; i < d; ++i) {
    double p = t.diag[i] - shift;
    if (i > 0) p -= l[i - 1] * t.off[i - 1];
    if (!(p > 0.0)) return false;
    piv[i] = p;
    if (i + 1 < d) l[i] = t.off[i] / p;
  }
  for (int i = 1; i < d; ++i) x[i] -= l[i - 1] * x[i - 1];
  for (int i = 0; i < d; ++i) x[i] /= piv[i];
  for (int i = d - 2; i >= 0; --i) x[i] -= l[i] * x[i + 1];
  return true;
}

namespace {

void normalize_with_sign(std::vector<double>& v) {
  double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  double sum = std::accumulate(v.begin(), v.end(), 0.0);
  double scale = (sum < 0.0 ? -1.0 : 1.0) / norm;
  for (double& x : v) x *= scale;
}

double residual_norm(const SymTridiagonal& t, double lambda,
                     const std::vector<double>& v) {
  std::vector<double> hv = t.apply(v);
  double acc = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    double r = hv[i] - lambda * v[i];
    acc += r * r;
  }
  return std::sqrt(acc);
}

Eigenpair dense_lowest(const SymTridiagonal& t) {
  int d = t.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    m(i, i) = t.diag[i];
    if (i + 1 < d) m(i, i + 1) = m(i + 1, i) = t.off[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigenpair out;
  out.value = es.eigenvalues()(0);
  out.vector.assign(es.eigenvectors().col(0).data(),
                    es.eigenvectors().col(0).data() + d);
  normalize_with_sign(out.vector);
  return out;
}

}  // namespace

Eigenpair lowest_eigenpair(const SymTridiagonal& t) {
  int d = t.dim();
  if (d == 0) throw DomainError("empty matrix");
  if (d == 1) return {t.diag[0], {1.0}};
  double lambda = eigenvalue_by_bisection(t, 0);
  double scale = 0.0;
  for (double v : t.diag) scale = std::max(scale, std::abs(v));
  for (double v : t.off) scale = std::max(scale, std::abs(v));
  scale = std::max(scale, std::numeric_limits<double>::min());

  // Shift slightly below the eigenvalue so the LDL^T stays positive definite.
  double delta = 1e-13 * scale;
  std::vector<double> v(d, 1.0), next;
  bool ok = true;
  for (int it = 0; it < 8 && ok; ++it) {
    double shift = lambda - delta;
    ok = solve_shifted_spd(t, shift, v, next);
    if (!ok) {
      delta *= 16.0;
      ok = true;
      continue;
    }
    v.swap(next);
    normalize_with_sign(v);
    if (residual_norm(t, lambda, v) <= 1e-11 * scale && it >= 1) break;
  }
  double res = residual_norm(t, lambda, v);
  if (!std::isfinite(res) || res > 1e-9 * scale) {
    if (d <= 64) return dense_lowest(t);
    throw SolverError("inverse iteration did not converge, residual " +
                      std::to_string(res));
  }
  // Rayleigh quotient is the sharper estimate once the vector is good.
  return {t.quadratic_form(v), v};
}

}  // namespace probmetro
