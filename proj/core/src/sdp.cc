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
#include "probmetro/sdp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "probmetro/errors.h"

namespace probmetro {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Block {
  const SpinBlock* source;
  std::vector<int> index;  // sublevels kept (positive cap)
  MatrixXd cost;           // H restricted to index
  int offset;              // first global constraint of this block
};

// Largest step a with X + a dX >= 0, capped at 1e30.
double max_step(const MatrixXd& x, const MatrixXd& dx) {
  Eigen::LLT<MatrixXd> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  MatrixXd l_inv_dx = llt.matrixL().solve(dx);
  MatrixXd m = llt.matrixL().solve(l_inv_dx.transpose());
  double lo = Eigen::SelfAdjointEigenSolver<MatrixXd>(
                  0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly)
                  .eigenvalues()(0);
  return lo >= 0.0 ? 1e30 : -1.0 / lo;
}

double max_step(const VectorXd& x, const VectorXd& dx) {
  double a = 1e30;
  for (int i = 0; i < x.size(); ++i) {
    if (dx(i) < 0.0) a = std::min(a, -x(i) / dx(i));
  }
  return a;
}

}  // namespace

SdpSolution sdp_solve(const BlockDecomposition& decomposition, double S,
                      const SdpOptions& options) {
  if (!(S > 0.0 && S <= 1.0)) {
    throw DomainError("success probability must lie in (0, 1]");
  }
  std::vector<Block> blocks;
  std::vector<double> caps;
  int rows = 0;
  for (const SpinBlock& b : decomposition.blocks) {
    if (!(b.probability > 0.0)) continue;
    Block blk{&b, {}, {}, static_cast<int>(caps.size())};
    for (size_t i = 0; i < b.diag.size(); ++i) {
      double c = b.probability * b.diag[i] / S;
      if (c > 0.0) {
        blk.index.push_back(static_cast<int>(i));
        caps.push_back(c);
      }
    }
    int d = static_cast<int>(blk.index.size());
    if (d == 0) continue;
    blk.cost = MatrixXd::Zero(d, d);
    for (int a = 0; a < d; ++a) {
      blk.cost(a, a) = 2.0;
      if (a + 1 < d && blk.index[a + 1] == blk.index[a] + 1) {
        blk.cost(a, a + 1) = blk.cost(a + 1, a) = -b.coupling[blk.index[a]];
      }
    }
    rows += d;
    blocks.push_back(std::move(blk));
  }
  if (rows > options.dim_cap) {
    throw SizeError("SDP has " + std::to_string(rows) + " rows, cap is " +
                    std::to_string(options.dim_cap));
  }
  double cap_sum = 0.0;
  for (double c : caps) cap_sum += c;
  if (cap_sum < 1.0 - 1e-9) throw DomainError("caps cannot reach unit trace");

  const bool equality = cap_sum <= 1.0 + 1e-9;
  const int n_lp = equality ? 0 : static_cast<int>(caps.size());
  const int first = equality ? 0 : 1;  // trace constraint sits at index 0
  const int m = first + static_cast<int>(caps.size());
  const int nb = static_cast<int>(blocks.size());

  VectorXd rhs_b(m);
  if (!equality) rhs_b(0) = 1.0;
  // A cap above one never binds under unit trace; clipping keeps small S
  // well scaled.
  for (size_t i = 0; i < caps.size(); ++i) {
    rhs_b(first + i) = equality ? caps[i] : std::min(caps[i], 1.0);
  }
  double c_norm = 0.0;
  for (const Block& b : blocks) c_norm = std::max(c_norm, b.cost.norm());

  std::vector<MatrixXd> X(nb), Z(nb);
  for (int k = 0; k < nb; ++k) {
    int d = blocks[k].cost.rows();
    X[k] = MatrixXd::Identity(d, d) / rows;
    Z[k] = MatrixXd::Identity(d, d) * (1.0 + c_norm);
  }
  VectorXd t = VectorXd::Constant(n_lp, 1.0 / rows);
  VectorXd z = VectorXd::Constant(n_lp, 1.0 + c_norm);
  VectorXd y = VectorXd::Zero(m);

  auto apply_a = [&](const std::vector<MatrixXd>& xs, const VectorXd& ts) {
    VectorXd out = VectorXd::Zero(m);
    for (int k = 0; k < nb; ++k) {
      if (!equality) out(0) += xs[k].trace();
      for (int a = 0; a < xs[k].rows(); ++a) out(first + blocks[k].offset + a) += xs[k](a, a);
    }
    for (int i = 0; i < n_lp; ++i) out(first + i) += ts(i);
    return out;
  };
  // Block part of A^T y.
  auto adjoint = [&](const VectorXd& v, int k) {
    int d = blocks[k].cost.rows();
    MatrixXd out = MatrixXd::Zero(d, d);
    for (int a = 0; a < d; ++a) {
      out(a, a) = (equality ? 0.0 : v(0)) + v(first + blocks[k].offset + a);
    }
    return out;
  };

  SdpSolution sol;
  sol.equality_form = equality;
  const double n_cone = rows + n_lp;
  std::vector<double> gap_history;
  for (int iter = 0;; ++iter) {
    VectorXd rp = rhs_b - apply_a(X, t);
    std::vector<MatrixXd> rd(nb);
    double rd_norm2 = 0.0, pobj = 0.0, xz = 0.0;
    for (int k = 0; k < nb; ++k) {
      rd[k] = blocks[k].cost - Z[k] - adjoint(y, k);
      rd_norm2 += rd[k].squaredNorm();
      pobj += (blocks[k].cost.cwiseProduct(X[k])).sum();
      xz += (X[k].cwiseProduct(Z[k])).sum();
    }
    VectorXd rd_t(n_lp);
    for (int i = 0; i < n_lp; ++i) rd_t(i) = -z(i) - y(first + i);
    rd_norm2 += rd_t.squaredNorm();
    xz += t.dot(z);
    double dobj = rhs_b.dot(y);
    double mu = xz / n_cone;
    sol.objective = pobj;
    sol.dual_objective = dobj;
    sol.duality_gap = pobj - dobj;
    sol.primal_infeasibility = rp.norm() / (1.0 + rhs_b.norm());
    sol.dual_infeasibility = std::sqrt(rd_norm2) / (1.0 + c_norm);
    sol.iterations = iter;
    double rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const bool feasible = sol.primal_infeasibility <= options.feasibility_tolerance &&
                          sol.dual_infeasibility <= options.feasibility_tolerance;
    if (rel_gap <= options.gap_tolerance && feasible) break;
    // Rounding floor: the gap stopped shrinking just above the target.
    gap_history.push_back(rel_gap);
    if (feasible && gap_history.size() > 10 &&
        rel_gap <= 100.0 * options.gap_tolerance &&
        rel_gap > 0.5 * gap_history[gap_history.size() - 11]) {
      sol.stalled = true;
      break;
    }
    if (iter >= options.max_iterations || !std::isfinite(mu)) {
      std::ostringstream msg;
      msg << "SDP did not converge after " << iter << " iterations: gap=" << rel_gap << " pobj=" << pobj
          << " dobj=" << dobj << " pinf=" << sol.primal_infeasibility
          << " dinf=" << sol.dual_infeasibility;
      throw SolverError(msg.str());
    }

    // Schur complement of the HKM direction.
    std::vector<MatrixXd> G(nb);
    MatrixXd M = MatrixXd::Zero(m, m);
    for (int k = 0; k < nb; ++k) {
      Eigen::LLT<MatrixXd> llt(Z[k]);
      if (llt.info() != Eigen::Success) throw SolverError("SDP dual iterate left the cone");
      G[k] = llt.solve(MatrixXd::Identity(Z[k].rows(), Z[k].cols()));
      MatrixXd xg = X[k] * G[k];
      int off = first + blocks[k].offset;
      int d = X[k].rows();
      if (!equality) {
        M(0, 0) += xg.trace();
        for (int a = 0; a < d; ++a) M(0, off + a) = M(off + a, 0) = xg(a, a);
      }
      M.block(off, off, d, d) += X[k].cwiseProduct(G[k].transpose());
    }
    for (int i = 0; i < n_lp; ++i) M(first + i, first + i) += t(i) / z(i);
    Eigen::LDLT<MatrixXd> schur(M);
    if (schur.info() != Eigen::Success) throw SolverError("SDP Schur complement is singular");

    // One Newton solve: r_blocks and r_lp are the complementarity targets.
    auto direction = [&](const std::vector<MatrixXd>& target, const VectorXd& target_lp,
                         std::vector<MatrixXd>& dX, std::vector<MatrixXd>& dZ,
                         VectorXd& dt, VectorXd& dz, VectorXd& dy) {
      std::vector<MatrixXd> r(nb);
      VectorXd r_lp(n_lp);
      for (int k = 0; k < nb; ++k) r[k] = target[k] - X[k] * rd[k] * G[k];
      for (int i = 0; i < n_lp; ++i) r_lp(i) = target_lp(i) - t(i) * rd_t(i) / z(i);
      VectorXd rhs = rp - apply_a(r, r_lp);
      dy = schur.solve(rhs);
      dX.resize(nb);
      dZ.resize(nb);
      for (int k = 0; k < nb; ++k) {
        dZ[k] = rd[k] - adjoint(dy, k);
        MatrixXd dx = target[k] - X[k] * dZ[k] * G[k];
        dX[k] = 0.5 * (dx + dx.transpose());
      }
      dz.resize(n_lp);
      dt.resize(n_lp);
      for (int i = 0; i < n_lp; ++i) {
        dz(i) = rd_t(i) - dy(first + i);
        dt(i) = target_lp(i) - t(i) * dz(i) / z(i);
      }
    };
    auto steps = [&](const std::vector<MatrixXd>& dX, const std::vector<MatrixXd>& dZ,
                     const VectorXd& dt, const VectorXd& dz) {
      double ap = max_step(t, dt), ad = max_step(z, dz);
      for (int k = 0; k < nb; ++k) {
        ap = std::min(ap, max_step(X[k], dX[k]));
        ad = std::min(ad, max_step(Z[k], dZ[k]));
      }
      return std::pair<double, double>(ap, ad);
    };

    // Predictor.
    std::vector<MatrixXd> target(nb), dXa, dZa;
    VectorXd target_lp(n_lp), dta, dza, dya;
    for (int k = 0; k < nb; ++k) target[k] = -X[k];
    for (int i = 0; i < n_lp; ++i) target_lp(i) = -t(i);
    direction(target, target_lp, dXa, dZa, dta, dza, dya);
    auto [ap_a, ad_a] = steps(dXa, dZa, dta, dza);
    ap_a = std::min(1.0, ap_a);
    ad_a = std::min(1.0, ad_a);
    double mu_aff = 0.0;
    for (int k = 0; k < nb; ++k) {
      mu_aff += ((X[k] + ap_a * dXa[k]).cwiseProduct(Z[k] + ad_a * dZa[k])).sum();
    }
    mu_aff += (t + ap_a * dta).dot(z + ad_a * dza);
    mu_aff /= n_cone;
    double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    // Corrector with the second-order term.
    for (int k = 0; k < nb; ++k) {
      target[k] = sigma * mu * G[k] - X[k] - dXa[k] * dZa[k] * G[k];
    }
    for (int i = 0; i < n_lp; ++i) {
      target_lp(i) = (sigma * mu - dta(i) * dza(i)) / z(i) - t(i);
    }
    std::vector<MatrixXd> dX, dZ;
    VectorXd dt, dz, dy;
    direction(target, target_lp, dX, dZ, dt, dz, dy);
    auto [ap, ad] = steps(dX, dZ, dt, dz);
    const double gamma = 0.95;
    ap = std::min(1.0, gamma * ap);
    ad = std::min(1.0, gamma * ad);
    // Rounding can push an eigenvalue near 1e-16 across zero; back off.
    std::vector<MatrixXd> X_next(nb), Z_next(nb);
    for (int tries = 0;; ++tries) {
      bool inside = true;
      for (int k = 0; k < nb && inside; ++k) {
        X_next[k] = X[k] + ap * dX[k];
        Z_next[k] = Z[k] + ad * dZ[k];
        inside = Eigen::LLT<MatrixXd>(X_next[k]).info() == Eigen::Success &&
                 Eigen::LLT<MatrixXd>(Z_next[k]).info() == Eigen::Success;
      }
      if (inside) break;
      if (tries == 40) throw SolverError("SDP iterate left the cone");
      ap *= 0.5;
      ad *= 0.5;
    }
    X.swap(X_next);
    Z.swap(Z_next);
    t += ap * dt;
    z += ad * dz;
    y += ad * dy;
  }

  // Report per block and extract the filter.
  for (const SpinBlock& b : decomposition.blocks) {
    int dim = b.j.dim();
    SdpBlockResult res{b.j, MatrixXd::Zero(dim, dim), 0.0, true};
    BlockFilter f{b.j, std::vector<double>(dim, 0.0)};
    for (int k = 0; k < nb; ++k) {
      if (blocks[k].source != &b) continue;
      const std::vector<int>& idx = blocks[k].index;
      for (size_t a = 0; a < idx.size(); ++a) {
        for (size_t c = 0; c < idx.size(); ++c) res.lambda(idx[a], idx[c]) = X[k](a, c);
        double cap = caps[blocks[k].offset + a];
        f.f[idx[a]] = std::min(1.0, std::sqrt(std::max(0.0, X[k](a, a)) / cap));
      }
      if (X[k].rows() >= 2) {
        VectorXd ev = Eigen::SelfAdjointEigenSolver<MatrixXd>(X[k], Eigen::EigenvaluesOnly)
                          .eigenvalues();
        res.second_eigenvalue = ev(ev.size() - 2);
        res.rank_one = res.second_eigenvalue <= options.rank_tolerance;
      }
    }
    sol.blocks.push_back(std::move(res));
    sol.filter.blocks.push_back(std::move(f));
  }
  return sol;
}

}  // namespace probmetro
