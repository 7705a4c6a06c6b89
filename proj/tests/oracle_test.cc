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

#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "probmetro/errors.h"
#include "probmetro/tradeoff.h"

namespace probmetro {
namespace {

DenseState multicopy_state(int n, double r) {
  return dense_dephase(symmetric_amplitudes(ProbeSpec::Multicopy(n)), r);
}

DenseSeed all_ones(int n) {
  const Eigen::Index d = Eigen::Index{1} << n;
  return DenseSeed{n, Eigen::MatrixXd::Ones(d, d)};
}

TEST(DenseDephaseTest, SingleQubit) {
  const DenseState s = multicopy_state(1, 0.6);
  EXPECT_NEAR(s.matrix(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(s.matrix(0, 1), 0.3, 1e-15);
  EXPECT_NEAR(s.matrix(1, 1), 0.5, 1e-15);
}

TEST(DenseDephaseTest, NoiselessIsPure) {
  const std::vector<double> psi = symmetric_amplitudes(ProbeSpec::Multicopy(3));
  const DenseState s = dense_dephase(psi, 1.0);
  const Eigen::Map<const Eigen::VectorXd> v(psi.data(), psi.size());
  EXPECT_LT((s.matrix - v * v.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DenseDephaseTest, PositiveUnitTrace) {
  const DenseState s = multicopy_state(5, 0.35);
  EXPECT_NEAR(s.matrix.trace(), 1.0, 1e-12);
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s.matrix).eigenvalues().minCoeff(),
            -1e-12);
}

TEST(DenseDephaseTest, SizeCap) {
  EXPECT_THROW(dense_dephase(std::vector<double>(std::size_t{1} << 13, 0.0), 0.5), SizeError);
  EXPECT_THROW(dense_dephase(std::vector<double>(3, 0.0), 0.5), ValidationError);
}

TEST(DenseDephaseTest, CommutesWithPhase) {
  Eigen::VectorXcd psi(8);
  for (int i = 0; i < 8; ++i) psi[i] = {std::cos(1.0 + i), std::sin(0.3 * i * i)};
  psi.normalize();
  const Eigen::MatrixXcd rho = psi * psi.adjoint();
  const Eigen::MatrixXcd a = dephase_matrix(phase_rotate(rho, 1.1), 0.55);
  const Eigen::MatrixXcd b = phase_rotate(dephase_matrix(rho, 0.55), 1.1);
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SpinBasisTest, OrthonormalAndComplete) {
  const SpinBasis basis = build_spin_basis(4);
  Eigen::MatrixXd all(16, 0);
  for (const auto& block : basis.blocks) {
    for (const auto& level : block.levels) {
      Eigen::MatrixXd next(16, all.cols() + level.cols());
      next << all, level;
      all = next;
    }
  }
  ASSERT_EQ(all.cols(), 16);
  EXPECT_LT((all.transpose() * all - Eigen::MatrixXd::Identity(16, 16)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ProjectionTest, MatchesDecomposeForThreeQubits) {
  const double r = 0.5;
  const auto d = decompose(ProbeSpec::Multicopy(3), NoiseModel::FromStrength(r));
  const auto projected = project_onto_blocks(multicopy_state(3, r), build_spin_basis(3));
  ASSERT_EQ(projected.size(), d.blocks.size());
  for (std::size_t k = 0; k < projected.size(); ++k) {
    const SpinBlock& b = d.blocks[k];
    EXPECT_EQ(projected[k].j, b.j);
    EXPECT_NEAR(projected[k].p, b.probability, 1e-12);
    for (int i = 0; i < b.j.dim(); ++i) {
      EXPECT_NEAR(projected[k].rho(i, i), b.diag[i], 1e-12);
      if (i + 1 < b.j.dim()) EXPECT_NEAR(projected[k].rho(i, i + 1), b.offdiag[i], 1e-12);
    }
  }
}

TEST(DirectFidelityTest, HandValues) {
  for (double r : {0.0, 0.5, 0.9}) {
    const DirectFidelity f = direct_fidelity(multicopy_state(1, r), all_ones(1));
    EXPECT_NEAR(f.F, 0.5 + r / 4, 1e-15);
    EXPECT_NEAR(f.S, 1.0, 1e-15);
  }
  const DirectFidelity id = direct_fidelity(multicopy_state(3, 0.7),
                                            DenseSeed{3, Eigen::MatrixXd::Identity(8, 8)});
  EXPECT_NEAR(id.F, 0.5, 1e-15);
  EXPECT_NEAR(id.S, 1.0, 1e-15);
  EXPECT_THROW(direct_fidelity(multicopy_state(2, 0.7), DenseSeed{2, Eigen::MatrixXd::Zero(4, 4)}),
               DomainError);
}

TEST(DirectFidelityTest, MatchesOptimalTradeoff) {
  const double r = 0.8;
  const auto d = decompose(ProbeSpec::Multicopy(3), NoiseModel::FromStrength(r));
  const TradeoffPoint p = global_tradeoff(d, 0.7);
  const DenseSeed seed = seed_from_filter(p.filter, build_spin_basis(3));
  const DirectFidelity f = direct_fidelity(multicopy_state(3, r), seed);
  EXPECT_NEAR(f.F, p.F, 1e-9);
  EXPECT_NEAR(f.S, 0.7, 1e-9);
  const Eigen::MatrixXd twirl = seed.twirled();
  EXPECT_LE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(twirl).eigenvalues().maxCoeff(),
            1.0 + 1e-12);
}

TEST(ThetaScanTest, CovariantSeeds) {
  const ThetaScan one = theta_scan(multicopy_state(1, 0.8), all_ones(1));
  EXPECT_NEAR(one.F_worst, 0.7, 1e-12);
  EXPECT_NEAR(one.F_avg, 0.7, 1e-12);
  const auto d = decompose(ProbeSpec::Multicopy(2), NoiseModel::FromStrength(0.5));
  const DenseSeed det = seed_from_filter(global_tradeoff(d, 1.0).filter, build_spin_basis(2));
  const ThetaScan two = theta_scan(multicopy_state(2, 0.5), det);
  EXPECT_NEAR(two.F_worst, two.F_avg, 1e-6);
  EXPECT_NEAR(two.F_avg, global_tradeoff(d, 1.0).F, 1e-12);
}

TEST(ThetaScanTest, NonCovariantSeedLosesWorstCase) {
  const ThetaScan scan = theta_scan(multicopy_state(2, 0.7), all_ones(2), 512, 512,
                                    [](double t) { return 1.0 + 0.5 * std::cos(t); });
  EXPECT_LT(scan.F_worst, scan.F_avg - 1e-6);
}

TEST(ThetaScanTest, RejectsTinyGrids) {
  EXPECT_THROW(theta_scan(multicopy_state(2, 0.7), all_ones(2), 512, 4), ValidationError);
}

BlockProblem multicopy_block(int n, double r, int twice_j) {
  const auto d = decompose(ProbeSpec::Multicopy(n), NoiseModel::FromStrength(r));
  return block_hamiltonian(*d.find(Spin::FromTwice(twice_j)), r);
}

TEST(ExhaustiveSearchTest, TwoLevelBlock) {
  const BlockProblem p = multicopy_block(1, 0.6, 1);
  EXPECT_NEAR(exhaustive_filter_search(p, 1.0).best_random, 1.4, 1e-12);
  EXPECT_NEAR(exhaustive_filter_search(p, 0.3).best_random, 2.0 - 0.6, 1e-12);
}

TEST(ExhaustiveSearchTest, TwoLevelAsymmetricEnvelope) {
  // Envelope (0.8, 0.6), a = 0.5: the ground state (1,1)/sqrt2 needs s <= 0.72.
  const BlockProblem p{Spin::FromTwice(1), 0.5, {0.5}, {0.8, 0.6}};
  EXPECT_NEAR(exhaustive_filter_search(p, 1.0).best_random, 2.0 - 2 * 0.5 * 0.48, 1e-12);
  EXPECT_NEAR(exhaustive_filter_search(p, 0.7).best_random, 1.5, 1e-10);
  EXPECT_NEAR(constrained_minimize(p, 0.7).sigma2, 1.5, 1e-12);
}

TEST(ExhaustiveSearchTest, MatchesActiveSetInFourDimensions) {
  const BlockProblem p = multicopy_block(3, 0.7, 3);
  for (double s : {0.9, 0.6, 0.3}) {
    const BlockSolution active = constrained_minimize(p, s);
    const ExhaustiveSearch search = exhaustive_filter_search(p, s, 64, 3, 200, active.xi);
    EXPECT_LE(active.sigma2, search.best_random + 1e-5) << s;
    EXPECT_NEAR(active.sigma2, search.best_random, 1e-5) << s;
    EXPECT_LE(search.best_overall, search.best_random);
    EXPECT_EQ(search.starts, 200);
  }
}

TEST(ExhaustiveSearchTest, DimensionCap) {
  EXPECT_THROW(exhaustive_filter_search(multicopy_block(6, 0.7, 6), 0.5), SizeError);
}

TEST(SymmetrizationTest, RandomProbesKeepDeltaAndSuccess) {
  const auto two = symmetric_optimality_probe_check(2, 0.5, 100, 11);
  EXPECT_EQ(two.trials, 100);
  EXPECT_LE(two.max_delta_difference, 1e-10);
  EXPECT_LE(two.max_success_difference, 1e-10);
  const auto three = symmetric_optimality_probe_check(3, 0.9, 100, 12);
  EXPECT_LE(three.max_delta_difference, 1e-10);
  EXPECT_LE(three.max_success_difference, 1e-10);
  EXPECT_THROW(symmetric_optimality_probe_check(4, 0.9, 1), SizeError);
}

TEST(VerificationTest, DefaultSuitePasses) {
  const VerificationReport report = run_verification();
  EXPECT_TRUE(report.all_passed());
  for (const auto& c : report.checks) {
    EXPECT_TRUE(c.passed) << c.name << " value=" << c.value << " at " << c.worst_case;
    EXPECT_GT(c.cases, 0) << c.name;
  }
}

TEST(VerificationTest, InjectedFaultIsLocated) {
  VerificationOptions options;
  options.n_max = 2;
  options.inject_fault = "fidelity_vs_dense";
  const VerificationReport report = run_verification(options);
  EXPECT_FALSE(report.all_passed());
  for (const auto& c : report.checks) EXPECT_EQ(c.passed, c.name != "fidelity_vs_dense") << c.name;
}

TEST(VerificationTest, RejectsLargeN) {
  VerificationOptions options;
  options.n_max = 5;
  EXPECT_THROW(run_verification(options), DomainError);
}

}  // namespace
}  // namespace probmetro
