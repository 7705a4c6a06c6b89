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
#include "probmetro/oracle.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <limits>
#include <random>
#include <string>

#include "probmetro/errors.h"
#include "probmetro/log_math.h"
#include "probmetro/number_format.h"
#include "probmetro/sdp.h"
#include "probmetro/tradeoff.h"

namespace probmetro {
namespace {

void check_qubits(int n) {
  if (n < 1 || n > kOracleMaxQubits) {
    throw SizeError("dense oracle supports 1.." +
                    std::to_string(kOracleMaxQubits) + " qubits, got " +
                    std::to_string(n));
  }
}

int qubits_for_dimension(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw ValidationError("operator dimension is not a power of two");
  }
  return n;
}

int popcount(std::size_t b) { return std::popcount(b); }

std::vector<std::vector<int>> sectors(int n) {
  std::vector<std::vector<int>> out(n + 1);
  for (int b = 0; b < (1 << n); ++b) out[popcount(b)].push_back(b);
  return out;
}

// J- on a full vector: every 0-bit is flipped to 1 in turn.
Eigen::VectorXd lower(const Eigen::VectorXd& v, int n) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  for (int b = 0; b < v.size(); ++b) {
    if (v[b] == 0.0) continue;
    for (int k = 0; k < n; ++k) {
      if (!(b >> k & 1)) out[b | (1 << k)] += v[b];
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd DenseSeed::twirled() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(matrix.rows(), matrix.cols());
  for (Eigen::Index a = 0; a < matrix.rows(); ++a) {
    for (Eigen::Index b = 0; b < matrix.cols(); ++b) {
      if (popcount(a) == popcount(b)) out(a, b) = matrix(a, b);
    }
  }
  return out;
}

std::vector<double> symmetric_amplitudes(const ProbeSpec& probe) {
  const int n = probe.n();
  check_qubits(n);
  std::vector<double> psi(std::size_t{1} << n);
  for (std::size_t b = 0; b < psi.size(); ++b) {
    const int beta = popcount(b);
    psi[b] = probe.amplitudes()[beta] *
             std::exp(-0.5 * log_binomial(n, beta));
  }
  return psi;
}

DenseState dense_dephase(std::span<const double> amplitudes, double r) {
  const int n = qubits_for_dimension(static_cast<Eigen::Index>(amplitudes.size()));
  check_qubits(n);
  DenseState state{n, Eigen::MatrixXd(amplitudes.size(), amplitudes.size())};
  std::vector<double> powers(n + 1, 1.0);
  for (int k = 1; k <= n; ++k) powers[k] = powers[k - 1] * r;
  for (std::size_t a = 0; a < amplitudes.size(); ++a) {
    for (std::size_t b = 0; b < amplitudes.size(); ++b) {
      state.matrix(a, b) = powers[popcount(a ^ b)] * amplitudes[a] * amplitudes[b];
    }
  }
  return state;
}

Eigen::MatrixXcd dephase_matrix(const Eigen::MatrixXcd& rho, double r) {
  const int n = qubits_for_dimension(rho.rows());
  check_qubits(n);
  Eigen::MatrixXcd out = rho;
  for (Eigen::Index a = 0; a < rho.rows(); ++a) {
    for (Eigen::Index b = 0; b < rho.cols(); ++b) {
      out(a, b) *= std::pow(r, popcount(a ^ b));
    }
  }
  return out;
}

Eigen::MatrixXcd phase_rotate(const Eigen::MatrixXcd& rho, double theta) {
  Eigen::MatrixXcd out = rho;
  for (Eigen::Index a = 0; a < rho.rows(); ++a) {
    for (Eigen::Index b = 0; b < rho.cols(); ++b) {
      out(a, b) *= std::polar(1.0, theta * (popcount(a) - popcount(b)));
    }
  }
  return out;
}

SpinBasis build_spin_basis(int n) {
  check_qubits(n);
  const auto sec = sectors(n);
  const Eigen::Index full = Eigen::Index{1} << n;
  SpinBasis basis;
  basis.n = n;
  for (int k = 0; 2 * k <= n; ++k) {
    const Spin j = Spin::FromTwice(n - 2 * k);
    const auto& here = sec[k];
    // Highest weights: kernel of J+ on popcount k, from the Gram matrix of J+.
    Eigen::MatrixXd highest;
    if (k == 0) {
      highest = Eigen::MatrixXd::Ones(1, 1);
    } else {
      const auto& below = sec[k - 1];
      std::vector<int> where(full, -1);
      for (std::size_t i = 0; i < below.size(); ++i) where[below[i]] = static_cast<int>(i);
      Eigen::MatrixXd raise = Eigen::MatrixXd::Zero(below.size(), here.size());
      for (std::size_t c = 0; c < here.size(); ++c) {
        for (int q = 0; q < n; ++q) {
          if (here[c] >> q & 1) raise(where[here[c] ^ (1 << q)], c) += 1.0;
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(raise.transpose() * raise);
      // Eigenvalues are integers, so 0.5 separates the kernel cleanly.
      Eigen::Index count = 0;
      while (count < eig.eigenvalues().size() && eig.eigenvalues()[count] < 0.5) ++count;
      highest = eig.eigenvectors().leftCols(count);
    }
    const auto nu = block_multiplicity(n, j);
    if (BigInt(highest.cols()) != nu) {
      throw ConsistencyError("highest-weight count does not match multiplicity");
    }
    SpinBasis::Block block;
    block.j = j;
    block.levels.assign(j.dim(), Eigen::MatrixXd::Zero(full, highest.cols()));
    for (Eigen::Index a = 0; a < highest.cols(); ++a) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(full);
      for (std::size_t c = 0; c < here.size(); ++c) v[here[c]] = highest(c, a);
      for (int i = j.dim() - 1; i >= 0; --i) {
        block.levels[i].col(a) = v;
        if (i == 0) break;
        const int tm = j.twice_m(i);
        const double norm = std::sqrt(0.25 * (j.twice() + tm) * (j.twice() - tm + 2));
        v = lower(v, n) / norm;
      }
    }
    basis.blocks.push_back(std::move(block));
  }
  return basis;
}

std::vector<ProjectedBlock> project_onto_blocks(const DenseState& state,
                                                const SpinBasis& basis) {
  if (state.n != basis.n) throw ValidationError("state and basis sizes differ");
  std::vector<ProjectedBlock> out;
  for (const auto& block : basis.blocks) {
    const int d = block.j.dim();
    Eigen::MatrixXd p(d, d);
    std::vector<Eigen::MatrixXd> images;
    images.reserve(d);
    for (int i = 0; i < d; ++i) images.push_back(state.matrix * block.levels[i]);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        p(a, b) = (block.levels[a].cwiseProduct(images[b])).sum();
      }
    }
    ProjectedBlock proj{block.j, p.trace(), Eigen::MatrixXd::Zero(d, d)};
    if (proj.p > 0.0) proj.rho = p / proj.p;
    out.push_back(std::move(proj));
  }
  return out;
}

DenseSeed seed_from_filter(const FilterProfile& profile, const SpinBasis& basis) {
  const Eigen::Index full = Eigen::Index{1} << basis.n;
  DenseSeed seed{basis.n, Eigen::MatrixXd::Zero(full, full)};
  for (const auto& block : basis.blocks) {
    const BlockFilter* filter = profile.find(block.j);
    if (filter == nullptr) continue;
    if (static_cast<int>(filter->f.size()) != block.j.dim()) {
      throw ValidationError("filter size does not match block dimension");
    }
    Eigen::MatrixXd chi = Eigen::MatrixXd::Zero(full, block.levels[0].cols());
    for (int i = 0; i < block.j.dim(); ++i) chi += filter->f[i] * block.levels[i];
    seed.matrix += chi * chi.transpose();
  }
  return seed;
}

DirectFidelity direct_fidelity(const DenseState& state, const DenseSeed& seed) {
  if (state.n != seed.n) throw ValidationError("state and seed sizes differ");
  double success = 0.0;
  double shifted = 0.0;
  const auto& rho = state.matrix;
  const auto& omega = seed.matrix;
  for (Eigen::Index a = 0; a < rho.rows(); ++a) {
    for (Eigen::Index b = 0; b < rho.cols(); ++b) {
      const int d = popcount(b) - popcount(a);
      if (d == 0) success += omega(a, b) * rho(b, a);
      if (d == 1) shifted += omega(a, b) * rho(b, a);
    }
  }
  if (success < 1e-14) throw DomainError("seed has vanishing success probability");
  return {0.5 * (1.0 + shifted / success), success};
}

ThetaScan theta_scan(const DenseState& state, const DenseSeed& seed,
                     int theta_points, int estimate_points,
                     const std::function<double(double)>& weight) {
  if (state.n != seed.n) throw ValidationError("state and seed sizes differ");
  if (theta_points < 1 || estimate_points < 2 * state.n + 2) {
    throw ValidationError("too few scan points");
  }
  const int n = state.n;
  std::vector<double> c(2 * n + 1, 0.0);  // index d + n
  for (Eigen::Index a = 0; a < state.matrix.rows(); ++a) {
    for (Eigen::Index b = 0; b < state.matrix.cols(); ++b) {
      c[popcount(a) - popcount(b) + n] += state.matrix(a, b) * seed.matrix(b, a);
    }
  }
  auto density = [&](double phi) {
    double g = 0.0;
    for (int d = -n; d <= n; ++d) g += c[d + n] * std::cos(phi * d);
    return g;
  };
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> w(estimate_points, 1.0);
  if (weight) {
    for (int e = 0; e < estimate_points; ++e) w[e] = weight(two_pi * e / estimate_points);
  }
  ThetaScan out{1.0, 0.0};
  for (int t = 0; t < theta_points; ++t) {
    const double theta = two_pi * t / theta_points;
    double norm = 0.0;
    double num = 0.0;
    for (int e = 0; e < estimate_points; ++e) {
      const double diff = theta - two_pi * e / estimate_points;
      const double g = w[e] * density(diff);
      norm += g;
      num += g * 0.5 * (1.0 + std::cos(diff));
    }
    if (norm <= 0.0) throw DomainError("seed never fires at some phase");
    const double f = num / norm;
    out.F_worst = std::min(out.F_worst, f);
    out.F_avg += f / theta_points;
  }
  return out;
}

namespace {

// One pass of 2-coordinate rotations; returns the decrease achieved.
double rotation_sweep(const SymTridiagonal& h, std::span<const double> upper,
                      std::vector<double>& x, int resolution) {
  const int d = static_cast<int>(x.size());
  const double before = h.quadratic_form(x);
  std::vector<double> trial = x;
  for (int i = 0; i < d; ++i) {
    for (int k = i + 1; k < d; ++k) {
      const double radius = std::hypot(x[i], x[k]);
      if (radius < 1e-300) continue;
      const double lo = upper[i] >= radius ? 0.0 : std::acos(upper[i] / radius);
      const double hi = upper[k] >= radius ? 0.5 * std::numbers::pi
                                           : std::asin(upper[k] / radius);
      if (lo > hi) continue;
      auto value = [&](double t) {
        trial[i] = radius * std::cos(t);
        trial[k] = radius * std::sin(t);
        return h.quadratic_form(trial);
      };
      const double current = std::atan2(x[k], x[i]);
      double best_t = std::clamp(current, lo, hi);
      double best = value(best_t);
      const double step = (hi - lo) / resolution;
      for (int g = 0; g <= resolution; ++g) {
        const double t = lo + g * step;
        const double v = value(t);
        if (v < best) { best = v; best_t = t; }
      }
      // Golden-section polish inside the neighbouring grid cells.
      double a = std::max(lo, best_t - step);
      double b = std::min(hi, best_t + step);
      const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
      for (int it = 0; it < 60 && b - a > 1e-15; ++it) {
        const double m1 = b - ratio * (b - a);
        const double m2 = a + ratio * (b - a);
        if (value(m1) < value(m2)) b = m2; else a = m1;
      }
      const double polished = 0.5 * (a + b);
      if (value(polished) < best) best_t = polished;
      x[i] = std::min(upper[i], radius * std::cos(best_t));
      x[k] = std::min(upper[k], radius * std::sin(best_t));
      trial[i] = x[i];
      trial[k] = x[k];
    }
  }
  return before - h.quadratic_form(x);
}

double local_search(const SymTridiagonal& h, std::span<const double> upper,
                    std::vector<double> x, int resolution) {
  for (int sweep = 0; sweep < 500; ++sweep) {
    if (rotation_sweep(h, upper, x, resolution) < 1e-15) break;
  }
  return h.quadratic_form(x);
}

}  // namespace

ExhaustiveSearch exhaustive_filter_search(
    const BlockProblem& problem, double s, int resolution, std::uint64_t seed,
    int random_starts, const std::optional<std::vector<double>>& extra_start) {
  const int d = problem.dim();
  if (d > 5) throw SizeError("exhaustive search is limited to dimension 5");
  if (!(s > 0.0 && s <= 1.0)) throw DomainError("s must lie in (0, 1]");
  const SymTridiagonal h = problem.hamiltonian();
  std::vector<double> upper(d);
  for (int i = 0; i < d; ++i) upper[i] = problem.envelope[i] / std::sqrt(s);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ExhaustiveSearch out;
  out.best_random = std::numeric_limits<double>::infinity();
  for (int start = 0; start < random_starts; ++start) {
    std::vector<double> dir(d);
    for (auto& v : dir) v = std::abs(normal(rng));
    // Scale until the clipped vector reaches unit norm.
    auto clipped_norm = [&](double t) {
      double sum = 0.0;
      for (int i = 0; i < d; ++i) sum += std::pow(std::min(upper[i], t * dir[i]), 2);
      return std::sqrt(sum);
    };
    double lo = 0.0;
    double hi = 1.0;
    while (clipped_norm(hi) < 1.0 && hi < 1e300) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (clipped_norm(mid) < 1.0 ? lo : hi) = mid;
    }
    std::vector<double> x(d);
    for (int i = 0; i < d; ++i) x[i] = std::min(upper[i], hi * dir[i]);
    const double norm = clipped_norm(hi);
    for (auto& v : x) v /= std::max(norm, 1.0);
    out.best_random = std::min(out.best_random, local_search(h, upper, x, resolution));
    ++out.starts;
  }
  out.best_overall = out.best_random;
  if (extra_start) {
    if (static_cast<int>(extra_start->size()) != d) {
      throw ValidationError("start vector has the wrong size");
    }
    out.best_overall = std::min(out.best_overall,
                                local_search(h, upper, *extra_start, resolution));
  }
  return out;
}

SymmetrizationReport symmetric_optimality_probe_check(int n, double r, int trials,
                                                      std::uint64_t seed) {
  if (n < 1 || n > 3) throw SizeError("symmetrization check supports n <= 3");
  const int dim = 1 << n;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto delta_and_success = [&](const Eigen::VectorXd& psi, const Eigen::MatrixXd& omega) {
    double delta = 0.0;
    double success = 0.0;
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        const double term = psi[a] * psi[b] * omega(a, b);
        const int shift = popcount(b) - popcount(a);
        if (shift == 1) delta += term * std::pow(r, popcount(a ^ b));
        if (shift == 0) success += term * std::pow(r, popcount(a ^ b));
      }
    }
    return std::pair{delta, success};
  };

  std::vector<std::vector<int>> perms;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  do perms.push_back(order); while (std::next_permutation(order.begin(), order.end()));
  auto permute = [&](int b, const std::vector<int>& p) {
    int out = 0;
    for (int k = 0; k < n; ++k) if (b >> k & 1) out |= 1 << p[k];
    return out;
  };

  SymmetrizationReport report;
  for (int trial = 0; trial < trials; ++trial) {
    Eigen::VectorXd psi(dim);
    for (auto& v : psi) v = std::abs(normal(rng)) + 0.05;
    psi.normalize();
    Eigen::MatrixXd g(dim, dim);
    for (auto& v : g.reshaped()) v = normal(rng);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    Eigen::VectorXd eig(dim);
    for (auto& v : eig) v = unit(rng);
    const Eigen::MatrixXd omega = q * eig.asDiagonal() * q.transpose();

    std::vector<double> sector_norm(n + 1, 0.0);
    for (int b = 0; b < dim; ++b) sector_norm[popcount(b)] += psi[b] * psi[b];
    for (auto& v : sector_norm) v = std::sqrt(v);
    Eigen::VectorXd phi(dim);
    Eigen::VectorXd psi_sym(dim);
    for (int b = 0; b < dim; ++b) {
      const int beta = popcount(b);
      const double count = std::exp(log_binomial(n, beta));
      phi[b] = std::sqrt(count) * psi[b] / sector_norm[beta];
      psi_sym[b] = sector_norm[beta] / std::sqrt(count);
    }
    const Eigen::MatrixXd weighted = (phi * phi.transpose()).cwiseProduct(omega);
    Eigen::MatrixXd omega_sym = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& p : perms) {
      for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) omega_sym(a, b) += weighted(permute(a, p), permute(b, p));
      }
    }
    omega_sym /= static_cast<double>(perms.size());

    const auto [delta, success] = delta_and_success(psi, omega);
    const auto [delta_sym, success_sym] = delta_and_success(psi_sym, omega_sym);
    report.max_delta_difference = std::max(report.max_delta_difference, std::abs(delta - delta_sym));
    report.max_success_difference =
        std::max(report.max_success_difference, std::abs(success - success_sym));
    ++report.trials;
  }
  return report;
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const VerificationCheck& c) { return c.passed; });
}

namespace {

class CheckAccumulator {
 public:
  CheckAccumulator(std::string name, double tolerance) {
    check_.name = std::move(name);
    check_.tolerance = tolerance;
  }
  void record(double value, const std::string& where) {
    ++check_.cases;
    if (std::isnan(value)) value = std::numeric_limits<double>::infinity();
    if (check_.cases == 1 || value > check_.value) {
      check_.value = value;
      check_.worst_case = where;
    }
  }
  VerificationCheck finish(const std::string& inject) {
    if (inject == check_.name) {
      check_.value += 1.0;
      check_.worst_case += " (injected fault)";
    }
    check_.margin = check_.tolerance - check_.value;
    check_.passed = check_.margin >= 0.0;
    return check_;
  }

 private:
  VerificationCheck check_;
};

std::string label(int n, double r, std::optional<double> S = {}) {
  std::string out = "n=" + std::to_string(n) + " r=" + format_number(r);
  if (S) out += " S=" + format_number(*S);
  return out;
}

}  // namespace

VerificationReport run_verification(const VerificationOptions& options) {
  if (options.n_max < 1 || options.n_max > 4) {
    throw DomainError("verification runs at 1 <= n <= 4");
  }
  CheckAccumulator decomposition("decompose_vs_dense", 1e-12);
  CheckAccumulator fidelity("fidelity_vs_dense", 1e-9);
  CheckAccumulator success("success_vs_dense", 1e-9);
  CheckAccumulator seeds("seed_validity", 1e-12);
  CheckAccumulator worst("worst_vs_average", 1e-6);
  CheckAccumulator exhaustive("constrained_vs_exhaustive", 1e-5);
  CheckAccumulator sdp("sdp_vs_allocation", 1e-6);
  CheckAccumulator symmetrization("symmetrization", 1e-10);
  CheckAccumulator commutation("dephase_phase_commutation", 1e-14);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  for (int n = 1; n <= options.n_max; ++n) {
    const SpinBasis basis = build_spin_basis(n);
    const ProbeSpec probe = ProbeSpec::Multicopy(n);
    for (double r : options.r_values) {
      const BlockDecomposition decomp = decompose(probe, NoiseModel::FromStrength(r));
      const DenseState state = dense_dephase(symmetric_amplitudes(probe), r);

      double err = 0.0;
      for (const auto& projected : project_onto_blocks(state, basis)) {
        const SpinBlock* block = decomp.find(projected.j);
        if (block == nullptr) {
          err = std::max(err, std::abs(projected.p));
          continue;
        }
        err = std::max(err, std::abs(projected.p - block->probability));
        // A p = 0 block keeps the r -> 1 limit, invisible to the projection.
        if (projected.p < 1e-14) continue;
        const int d = projected.j.dim();
        for (int a = 0; a < d; ++a) {
          err = std::max(err, std::abs(projected.rho(a, a) - block->diag[a]));
          if (a + 1 < d) {
            err = std::max(err, std::abs(projected.rho(a, a + 1) - block->offdiag[a]));
          }
        }
      }
      decomposition.record(err, label(n, r));

      const TradeoffSolver solver(decomp);
      for (double S : options.S_values) {
        const TradeoffPoint point = solver.solve(S);
        const DenseSeed seed = seed_from_filter(point.filter, basis);
        const DirectFidelity direct = direct_fidelity(state, seed);
        fidelity.record(std::abs(direct.F - point.F), label(n, r, S));
        success.record(std::abs(direct.S - S), label(n, r, S));

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(seed.matrix);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> twirl(seed.twirled());
        seeds.record(std::max({-full.eigenvalues().minCoeff(),
                               -twirl.eigenvalues().minCoeff(),
                               twirl.eigenvalues().maxCoeff() - 1.0}),
                     label(n, r, S));

        const ThetaScan scan = theta_scan(state, seed);
        worst.record(std::abs(scan.F_avg - scan.F_worst), label(n, r, S));

        const SdpSolution relaxed = sdp_solve(decomp, S);
        sdp.record(std::abs(relaxed.objective - point.sigma2) /
                       std::max(1e-300, std::abs(point.sigma2)),
                   label(n, r, S));
      }

      for (const auto& block : decomp.blocks) {
        if (block.j.dim() > 5 || block.j.dim() < 2) continue;
        const BlockProblem problem = block_hamiltonian(block, r);
        for (double s : {0.3, 0.7}) {
          const BlockSolution active = constrained_minimize(problem, s);
          const ExhaustiveSearch search =
              exhaustive_filter_search(problem, s, 32, options.seed, 200, active.xi);
          exhaustive.record(std::max(0.0, active.sigma2 - search.best_random),
                            label(n, r) + " j=" + format_number(block.j.value()) +
                                " s=" + format_number(s));
        }
      }

      // Phase rotation commutes with dephasing on a random pure state.
      const int dim = 1 << n;
      Eigen::VectorXcd psi(dim);
      for (auto& v : psi) v = {normal(rng), normal(rng)};
      psi.normalize();
      const Eigen::MatrixXcd pure = psi * psi.adjoint();
      const double theta = 0.7;
      const Eigen::MatrixXcd lhs = dephase_matrix(phase_rotate(pure, theta), r);
      const Eigen::MatrixXcd rhs = phase_rotate(dephase_matrix(pure, r), theta);
      commutation.record((lhs - rhs).cwiseAbs().maxCoeff(), label(n, r));

      if (n <= 3) {
        const auto report = symmetric_optimality_probe_check(n, r, 20, options.seed + n);
        symmetrization.record(
            std::max(report.max_delta_difference, report.max_success_difference),
            label(n, r));
      }
    }
  }

  VerificationReport report;
  for (CheckAccumulator* acc : {&decomposition, &fidelity, &success, &seeds, &worst,
                                &exhaustive, &sdp, &symmetrization, &commutation}) {
    report.checks.push_back(acc->finish(options.inject_fault));
  }
  return report;
}

}  // namespace probmetro
