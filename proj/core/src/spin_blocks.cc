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
#include "probmetro/spin_blocks.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "probmetro/errors.h"
#include "probmetro/log_math.h"
#include "probmetro/parallel.h"

namespace probmetro {
namespace {

// ln nu_j without forming the big integer.
double log_multiplicity(int n, Spin j) {
  int k = (n - j.twice()) / 2;
  return log_binomial(n, k) + std::log(static_cast<double>(j.dim())) -
         std::log(static_cast<double>(n - k + 1));
}

BigInt big_binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt c = 1;
  for (int i = 1; i <= k; ++i) {
    c *= n - k + i;
    c /= i;
  }
  return c;
}

// Evaluates the noise core with a shared factorial table.
class CoreEvaluator {
 public:
  CoreEvaluator(const LogFactorials& lf, double r)
      : lf_(lf), r_zero_(r == 0.0), log_r_(r > 0.0 ? std::log(r) : kNegInf) {}

  double log_core(int tj, int tm, int tmp) const {
    if (tm < tmp) std::swap(tm, tmp);
    int jm = (tj - tm) / 2;
    int jpm = (tj + tm) / 2;
    int jmp = (tj - tmp) / 2;
    int jpmp = (tj + tmp) / 2;
    int d = (tm - tmp) / 2;
    double base = 0.5 * (lf_(jm) + lf_(jpm) + lf_(jmp) + lf_(jpmp));
    if (r_zero_) {
      if (d != 0) return kNegInf;
      return base - lf_(jm) - lf_(jpmp) - lf_(0) - lf_(0);
    }
    int kmax = std::min(jm, jpmp);
    terms_.clear();
    for (int k = 0; k <= kmax; ++k) {
      terms_.push_back(base - lf_(jm - k) - lf_(jpmp - k) - lf_(d + k) -
                       lf_(k) + 2.0 * k * log_r_);
    }
    return d * log_r_ + log_sum_exp(terms_);
  }

 private:
  const LogFactorials& lf_;
  bool r_zero_;
  double log_r_;
  mutable std::vector<double> terms_;
};

void check_spin(Spin j, int twice_m) {
  if (j.twice() < 0) throw DomainError("negative spin");
  if (std::abs(twice_m) > j.twice() || (j.twice() - twice_m) % 2 != 0) {
    throw DomainError("magnetic number " + std::to_string(twice_m) +
                      "/2 invalid for 2j=" + std::to_string(j.twice()));
  }
}

void check_r(double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw DomainError("noise strength r must lie in [0, 1]");
  }
}

// (J-j) ln(1-r^2), with 0 * (-inf) read as 0.
double log_noise_prefactor(int twice_J, int twice_j, double r) {
  int steps = (twice_J - twice_j) / 2;
  if (steps == 0) return 0.0;
  return steps * std::log1p(-r * r);
}

double log_binomial_table(const LogFactorials& lf, int n, int k) {
  return lf(n) - lf(k) - lf(n - k);
}

// ln(c_beta / sqrt(C(n, beta))) for the sublevels of block j.
std::vector<double> log_weights(const ProbeSpec& probe, const LogFactorials& lf,
                                Spin j) {
  int n = probe.n();
  std::vector<double> w(j.dim());
  for (int i = 0; i < j.dim(); ++i) {
    int beta = (n - j.twice_m(i)) / 2;
    w[i] = probe.log_amplitudes()[beta] -
           0.5 * log_binomial_table(lf, n, beta);
  }
  return w;
}

std::optional<SpinBlock> build_block(const ProbeSpec& probe, double r,
                                     const LogFactorials& lf, Spin j) {
  CoreEvaluator core(lf, r);
  int dim = j.dim();
  std::vector<double> w = log_weights(probe, lf, j);
  std::vector<double> logd(dim), logo(std::max(dim - 1, 0)), t(dim);
  for (int i = 0; i < dim; ++i) {
    int tm = j.twice_m(i);
    logd[i] = core.log_core(j.twice(), tm, tm);
    t[i] = 2.0 * w[i] + logd[i];
    if (i + 1 < dim) logo[i] = core.log_core(j.twice(), tm + 2, tm);
  }
  double log_trace = log_sum_exp(t);
  if (log_trace == kNegInf) return std::nullopt;

  SpinBlock b;
  b.j = j;
  b.multiplicity = block_multiplicity(probe.n(), j);
  b.log_multiplicity = log_multiplicity(probe.n(), j);
  b.diag.resize(dim);
  b.offdiag.resize(dim - 1);
  b.coupling.resize(dim - 1);
  for (int i = 0; i < dim; ++i) b.diag[i] = std::exp(t[i] - log_trace);
  for (int i = 0; i + 1 < dim; ++i) {
    b.offdiag[i] = std::exp(w[i] + w[i + 1] + logo[i] - log_trace);
    b.coupling[i] =
        r == 1.0 ? 1.0 : std::exp(logo[i] - 0.5 * (logd[i] + logd[i + 1]));
  }
  double log_p = b.log_multiplicity +
                 log_noise_prefactor(probe.n(), j.twice(), r) + log_trace;
  b.probability = std::exp(log_p);
  return b;
}

}  // namespace

NoiseModel NoiseModel::FromStrength(double r) {
  check_r(r);
  return NoiseModel(r);
}

NoiseModel NoiseModel::FromFlipProbability(double p_flip) {
  if (!(p_flip >= 0.0 && p_flip <= 0.5)) {
    throw DomainError("flip probability must lie in [0, 1/2]");
  }
  return NoiseModel(1.0 - 2.0 * p_flip);
}

ProbeSpec ProbeSpec::Multicopy(int n) {
  if (n < 1) throw DomainError("probe needs at least one qubit");
  ProbeSpec p;
  p.n_ = n;
  p.kind_ = ProbeKind::kMulticopy;
  p.amplitudes_.resize(n + 1);
  p.log_amplitudes_.resize(n + 1);
  for (int beta = 0; beta <= n; ++beta) {
    double la = 0.5 * (log_binomial(n, beta) - n * std::log(2.0));
    p.log_amplitudes_[beta] = la;
    p.amplitudes_[beta] = std::exp(la);
  }
  return p;
}

ProbeSpec ProbeSpec::Custom(int n, std::vector<double> amplitudes) {
  if (n < 1) throw ValidationError("probe needs at least one qubit");
  if (static_cast<int>(amplitudes.size()) != n + 1) {
    throw ValidationError("probe for n=" + std::to_string(n) + " needs " +
                          std::to_string(n + 1) + " amplitudes, got " +
                          std::to_string(amplitudes.size()));
  }
  double norm = 0.0;
  for (double c : amplitudes) {
    if (!std::isfinite(c)) throw ValidationError("non-finite amplitude");
    if (c < 0.0) {
      throw ValidationError("amplitudes must be non-negative");
    }
    norm += c * c;
  }
  if (std::abs(norm - 1.0) > 1e-9) {
    throw ValidationError("probe not normalized: sum c^2 = " +
                          std::to_string(norm));
  }
  ProbeSpec p;
  p.n_ = n;
  p.kind_ = ProbeKind::kCustom;
  p.amplitudes_ = std::move(amplitudes);
  p.log_amplitudes_.resize(n + 1);
  for (int beta = 0; beta <= n; ++beta) {
    double c = p.amplitudes_[beta];
    p.log_amplitudes_[beta] = c > 0.0 ? std::log(c) : kNegInf;
  }
  return p;
}

const SpinBlock* BlockDecomposition::find(Spin j) const {
  for (const SpinBlock& b : blocks) {
    if (b.j == j) return &b;
  }
  return nullptr;
}

BigInt block_multiplicity(int n, Spin j) {
  if (j.twice() > n || (n - j.twice()) % 2 != 0 || j.twice() < 0) {
    throw DomainError("spin not contained in n qubits");
  }
  int k = (n - j.twice()) / 2;
  return big_binomial(n, k) - big_binomial(n, k - 1);
}

std::optional<double> log_wigner_delta(Spin j, int twice_m, int twice_mp,
                                       int k) {
  check_spin(j, twice_m);
  check_spin(j, twice_mp);
  int a = (j.twice() - twice_m) / 2 - k;
  int b = (j.twice() + twice_mp) / 2 - k;
  int c = (twice_m - twice_mp) / 2 + k;
  if (a < 0 || b < 0 || c < 0 || k < 0) return std::nullopt;
  LogFactorials lf(j.twice() + 1);
  double num = 0.5 * (lf((j.twice() - twice_m) / 2) + lf((j.twice() + twice_m) / 2) +
                      lf((j.twice() - twice_mp) / 2) + lf((j.twice() + twice_mp) / 2));
  return num - lf(a) - lf(b) - lf(c) - lf(k);
}

double wigner_delta(Spin j, int twice_m, int twice_mp, int k) {
  auto v = log_wigner_delta(j, twice_m, twice_mp, k);
  return v ? std::exp(*v) : 0.0;
}

double log_dephasing_core(Spin j, int twice_m, int twice_mp, double r) {
  check_r(r);
  check_spin(j, twice_m);
  check_spin(j, twice_mp);
  LogFactorials lf(j.twice() + 1);
  return CoreEvaluator(lf, r).log_core(j.twice(), twice_m, twice_mp);
}

double dephasing_entry(Spin J, Spin j, int twice_mp, int twice_m, double r) {
  if (j > J || (J.twice() - j.twice()) % 2 != 0) {
    throw DomainError("block spin not contained in J");
  }
  double lc = log_dephasing_core(j, twice_m, twice_mp, r);
  return std::exp(lc + log_noise_prefactor(J.twice(), j.twice(), r));
}

MulticopySums multicopy_block_sums(int n, Spin j, double r) {
  check_r(r);
  if (n < 1) throw DomainError("n must be positive");
  double pre = log_noise_prefactor(n, j.twice(), r);
  double log_sum;
  if (r == 0.0) {
    log_sum = std::log(static_cast<double>(j.dim()));
  } else {
    // [(1+r)^N - (1-r)^N] / (2r), written to stay accurate as r -> 0.
    int N = j.dim();
    double log_q = std::log1p(-r) - std::log1p(r);
    double one_minus = r == 1.0 ? 1.0 : -std::expm1(N * log_q);
    log_sum = N * std::log1p(r) + std::log(one_minus) - std::log(2.0 * r);
  }
  log_sum += pre;
  block_multiplicity(n, j);  // validates j
  double log_nu = log_multiplicity(n, j);
  return {std::exp(log_sum), std::exp(log_nu + log_sum - n * std::log(2.0))};
}

BlockDecomposition decompose(const ProbeSpec& probe, const NoiseModel& noise,
                             const DecomposeOptions& options) {
  int n = probe.n();
  LogFactorials lf(n + 1);
  std::vector<Spin> spins;
  for (int tj = n; tj >= 0; tj -= 2) spins.push_back(Spin::FromTwice(tj));
  std::vector<std::optional<SpinBlock>> built(spins.size());
  parallel_for(spins.size(), options.threads, [&](std::size_t i) {
    built[i] = build_block(probe, noise.r(), lf, spins[i]);
  });
  BlockDecomposition out;
  out.n = n;
  out.r = noise.r();
  for (auto& b : built) {
    if (b) out.blocks.push_back(std::move(*b));
  }
  return out;
}

Eigen::MatrixXd full_block_matrix(const ProbeSpec& probe,
                                  const NoiseModel& noise, Spin j,
                                  int dim_cap) {
  if (j.twice() > probe.n() || (probe.n() - j.twice()) % 2 != 0) {
    throw DomainError("block spin not contained in the probe");
  }
  if (j.dim() > dim_cap) {
    throw SizeError("block dimension " + std::to_string(j.dim()) +
                    " exceeds cap " + std::to_string(dim_cap));
  }
  LogFactorials lf(probe.n() + 1);
  CoreEvaluator core(lf, noise.r());
  std::vector<double> w = log_weights(probe, lf, j);
  int dim = j.dim();
  Eigen::MatrixXd logs(dim, dim);
  std::vector<double> diag_terms(dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = a; b < dim; ++b) {
      double v = w[a] + w[b] + core.log_core(j.twice(), j.twice_m(b), j.twice_m(a));
      logs(a, b) = logs(b, a) = v;
    }
    diag_terms[a] = logs(a, a);
  }
  double log_trace = log_sum_exp(diag_terms);
  if (log_trace == kNegInf) {
    throw DomainError("probe has no weight in this block");
  }
  Eigen::MatrixXd rho(dim, dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) rho(a, b) = std::exp(logs(a, b) - log_trace);
  }
  return rho;
}

}  // namespace probmetro
