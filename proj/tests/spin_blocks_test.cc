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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "probmetro/errors.h"
#include "probmetro/log_math.h"

namespace probmetro {
namespace {

// Exact binomial for n <= 120.
__int128 binomial128(int n, int k) {
  __int128 c = 1;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

std::string to_string128(__int128 v) {
  std::string s;
  do {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  } while (v > 0);
  return s;
}

ProbeSpec random_symmetric_probe(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::vector<double> c(n + 1);
  double norm = 0.0;
  for (auto& x : c) {
    x = unit(rng);
    norm += x * x;
  }
  for (auto& x : c) x /= std::sqrt(norm);
  return ProbeSpec::Custom(n, c);
}

TEST(SpinTest, SublevelIndexing) {
  const Spin j = Spin::FromTwice(3);
  EXPECT_EQ(j.dim(), 4);
  EXPECT_DOUBLE_EQ(j.value(), 1.5);
  EXPECT_EQ(j.twice_m(0), -3);
  EXPECT_EQ(j.twice_m(3), 3);
  EXPECT_EQ(j.index_of(1), 2);
  EXPECT_LT(Spin::FromTwice(1), Spin::MaxForQubits(3));
}

TEST(LogBinomialTest, SmallValues) {
  EXPECT_NEAR(log_binomial(4, 2), std::log(6.0), 1e-14);
  EXPECT_EQ(log_binomial(17, 0), 0.0);
  EXPECT_EQ(log_binomial(17, 17), 0.0);
}

TEST(LogBinomialTest, MatchesExactIntegerAtHundred) {
  const double exact = std::log(static_cast<double>(binomial128(100, 50)));
  EXPECT_NEAR(log_binomial(100, 50) / exact, 1.0, 1e-12);
  EXPECT_NEAR(log_binomial(100, 50), 66.78384165201743, 1e-11);
}

TEST(LogBinomialTest, LargeArgumentsStayAccurate) {
  // Symmetry and Pascal's rule in the log domain at n = 10^4.
  EXPECT_NEAR(log_binomial(10000, 3000), log_binomial(10000, 7000), 1e-9);
  const double pascal = log_add_exp(log_binomial(9999, 2999), log_binomial(9999, 3000));
  EXPECT_NEAR(log_binomial(10000, 3000) / pascal, 1.0, 1e-12);
}

TEST(LogBinomialTest, RejectsOutOfRange) {
  EXPECT_THROW(log_binomial(5, 6), DomainError);
  EXPECT_THROW(log_binomial(5, -1), DomainError);
  EXPECT_THROW(log_binomial(-1, 0), DomainError);
}

TEST(LogMathTest, SumExp) {
  const std::vector<double> terms{std::log(1.0), std::log(2.0), std::log(3.0)};
  EXPECT_NEAR(log_sum_exp(terms), std::log(6.0), 1e-15);
  EXPECT_EQ(log_sum_exp(std::vector<double>{}), kNegInf);
  EXPECT_NEAR(log_add_exp(1000.0, 1000.0), 1000.0 + std::log(2.0), 1e-12);
  LogFactorials lf(20);
  EXPECT_NEAR(lf(5), std::log(120.0), 1e-13);
}

TEST(WignerDeltaTest, HandValues) {
  const Spin half = Spin::FromTwice(1);
  EXPECT_NEAR(wigner_delta(half, 1, 1, 0), 1.0, 1e-15);
  EXPECT_FALSE(log_wigner_delta(half, 1, 1, 1).has_value());
  EXPECT_EQ(wigner_delta(half, 1, 1, 1), 0.0);
  EXPECT_NEAR(wigner_delta(Spin::FromTwice(2), 2, 0, 0), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(*log_wigner_delta(Spin::FromTwice(2), 2, 0, 0), 0.5 * std::log(2.0), 1e-15);
}

TEST(DephasingEntryTest, SingleTermCases) {
  const Spin half = Spin::FromTwice(1);
  for (double r : {0.0, 0.3, 1.0}) {
    EXPECT_NEAR(dephasing_entry(half, half, 1, 1, r), 1.0, 1e-15);
  }
  for (int tj : {2, 5, 10}) {
    const Spin j = Spin::FromTwice(tj);
    EXPECT_NEAR(dephasing_entry(j, j, tj, tj, 0.37), 1.0, 1e-14);
  }
}

TEST(DephasingEntryTest, DiagonalSumMatchesClosedForm) {
  const Spin one = Spin::FromTwice(2);
  double sum = 0.0;
  for (int tm : {-2, 0, 2}) sum += dephasing_entry(one, one, tm, tm, 0.5);
  EXPECT_NEAR(sum, 3.25, 1e-14);
}

// At r = 1 the maximal block carries no suppression: D^J_{m',m} is the
// product of the symmetric-state norms sqrt(C(n, J-m') C(n, J-m)), so rho^J
// is the pure projector c c^T.
TEST(DephasingEntryTest, NoiselessMaximalBlockIsUnsuppressed) {
  for (int n = 1; n <= 10; ++n) {
    const Spin J = Spin::MaxForQubits(n);
    for (int a = -n; a <= n; a += 2) {
      for (int b = -n; b <= n; b += 2) {
        const double norms = 0.5 * (log_binomial(n, (n - a) / 2) + log_binomial(n, (n - b) / 2));
        EXPECT_NEAR(dephasing_entry(J, J, a, b, 1.0) / std::exp(norms), 1.0, 1e-12)
            << n << " " << a << " " << b;
      }
    }
  }
  EXPECT_NEAR(dephasing_entry(Spin::FromTwice(2), Spin::FromTwice(2), 0, 2, 1.0), std::sqrt(2.0),
              1e-15);
}

TEST(DephasingEntryTest, RejectsBadInput) {
  const Spin one = Spin::FromTwice(2);
  EXPECT_THROW(dephasing_entry(one, one, 0, 0, 1.5), DomainError);
  EXPECT_THROW(dephasing_entry(one, one, 4, 0, 0.5), DomainError);
  EXPECT_THROW(dephasing_entry(one, Spin::FromTwice(4), 0, 0, 0.5), DomainError);
}

TEST(NoiseModelTest, FlipProbabilityRoundTrip) {
  const NoiseModel noise = NoiseModel::FromFlipProbability(0.1);
  EXPECT_NEAR(noise.r(), 0.8, 1e-15);
  EXPECT_NEAR(NoiseModel::FromStrength(0.8).flip_probability(), 0.1, 1e-15);
  EXPECT_THROW(NoiseModel::FromStrength(-0.1), DomainError);
  EXPECT_THROW(NoiseModel::FromFlipProbability(0.6), DomainError);
}

TEST(ProbeSpecTest, MulticopyAmplitudes) {
  const ProbeSpec probe = ProbeSpec::Multicopy(4);
  ASSERT_EQ(probe.amplitudes().size(), 5u);
  EXPECT_NEAR(probe.amplitudes()[2], std::sqrt(6.0 / 16.0), 1e-15);
  EXPECT_EQ(probe.kind(), ProbeKind::kMulticopy);
  EXPECT_EQ(probe.max_spin().twice(), 4);
}

TEST(ProbeSpecTest, Validation) {
  EXPECT_THROW(ProbeSpec::Custom(2, {1.0, 0.0}), ValidationError);
  EXPECT_THROW(ProbeSpec::Custom(1, {0.5, 0.5}), ValidationError);
  EXPECT_THROW(ProbeSpec::Custom(1, {-std::sqrt(0.5), std::sqrt(0.5)}), ValidationError);
  EXPECT_NO_THROW(ProbeSpec::Custom(1, {1.0, 0.0}));
  EXPECT_EQ(ProbeSpec::Custom(1, {1.0, 0.0}).log_amplitudes()[1], kNegInf);
}

TEST(MultiplicityTest, ExactCounts) {
  EXPECT_EQ(block_multiplicity(2, Spin::FromTwice(0)), 1);
  EXPECT_EQ(block_multiplicity(7, Spin::FromTwice(5)), 6);
  // j = 0 of 100 qubits is the Catalan number C(100,50)/51.
  EXPECT_EQ(block_multiplicity(100, Spin::FromTwice(0)).str(),
            "1978261657756160653623774456");
  EXPECT_EQ(to_string128(binomial128(100, 50) / 51), "1978261657756160653623774456");
  // sum_j nu_j (2j+1) = 2^n.
  for (int n = 1; n <= 30; ++n) {
    BigInt total = 0;
    for (int tj = n; tj >= 0; tj -= 2) total += block_multiplicity(n, Spin::FromTwice(tj)) * (tj + 1);
    EXPECT_EQ(total, BigInt(1) << n) << n;
  }
}

TEST(DecomposeTest, SingleQubit) {
  for (double r : {0.0, 0.4, 1.0}) {
    const auto d = decompose(ProbeSpec::Multicopy(1), NoiseModel::FromStrength(r));
    ASSERT_EQ(d.blocks.size(), 1u);
    const SpinBlock& b = d.blocks[0];
    EXPECT_EQ(b.j.twice(), 1);
    EXPECT_NEAR(b.probability, 1.0, 1e-15);
    EXPECT_NEAR(b.diag[0], 0.5, 1e-15);
    EXPECT_NEAR(b.diag[1], 0.5, 1e-15);
    EXPECT_NEAR(b.offdiag[0], r / 2, 1e-15);
  }
}

TEST(DecomposeTest, TwoQubitProbabilities) {
  const auto d = decompose(ProbeSpec::Multicopy(2), NoiseModel::FromStrength(0.5));
  ASSERT_EQ(d.blocks.size(), 2u);
  EXPECT_EQ(d.blocks[0].j.twice(), 2);
  EXPECT_NEAR(d.blocks[0].probability, 0.8125, 1e-15);
  EXPECT_NEAR(d.blocks[1].probability, 0.1875, 1e-15);
  ASSERT_NE(d.find(Spin::FromTwice(0)), nullptr);
  EXPECT_EQ(d.find(Spin::FromTwice(4)), nullptr);
}

TEST(DecomposeTest, TypicalSpinPeakMatchesGaussian) {
  const auto d = decompose(ProbeSpec::Multicopy(20), NoiseModel::FromStrength(0.8));
  EXPECT_EQ(d.blocks.size(), 11u);
  const SpinBlock* peak = &d.blocks[0];
  for (const auto& b : d.blocks) {
    if (b.probability > peak->probability) peak = &b;
  }
  // j0 = r J = 8; p_8 and p_9 differ by half a percent.
  EXPECT_LE(std::abs(peak->j.twice() - 16), 2);
  const double gaussian = 1.0 / std::sqrt(std::numbers::pi * 10 * 0.36);
  EXPECT_NEAR(d.find(Spin::FromTwice(16))->probability / gaussian, 1.0, 0.10);
}

TEST(DecomposeTest, InvariantsOverProbesAndNoise) {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 30; ++n) {
    for (double r : {0.1, 0.5, 0.9}) {
      for (int variant = 0; variant < 2; ++variant) {
        const ProbeSpec probe = variant == 0 ? ProbeSpec::Multicopy(n)
                                             : random_symmetric_probe(n, rng);
        const NoiseModel noise = NoiseModel::FromStrength(r);
        const auto d = decompose(probe, noise);
        double total = 0.0;
        for (const auto& b : d.blocks) {
          total += b.probability;
          double trace = 0.0;
          for (double x : b.diag) {
            EXPECT_GT(x, 0.0);
            trace += x;
          }
          EXPECT_NEAR(trace, 1.0, 1e-10);
          if (n <= 16) {
            const Eigen::MatrixXd rho = full_block_matrix(probe, noise, b.j);
            const double low =
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(rho).eigenvalues().minCoeff();
            EXPECT_GE(low, -1e-10) << "n=" << n << " r=" << r << " j2=" << b.j.twice();
          }
        }
        EXPECT_NEAR(total, 1.0, 1e-9) << "n=" << n << " r=" << r;
      }
    }
  }
}

TEST(DecomposeTest, ParallelMatchesSerial) {
  const auto probe = ProbeSpec::Multicopy(61);
  const NoiseModel noise = NoiseModel::FromStrength(0.7);
  const auto serial = decompose(probe, noise);
  const auto parallel = decompose(probe, noise, DecomposeOptions{4});
  ASSERT_EQ(serial.blocks.size(), parallel.blocks.size());
  for (std::size_t i = 0; i < serial.blocks.size(); ++i) {
    EXPECT_EQ(serial.blocks[i].probability, parallel.blocks[i].probability);
    EXPECT_EQ(serial.blocks[i].offdiag, parallel.blocks[i].offdiag);
  }
}

TEST(DecomposeTest, LargeProbeStaysFinite) {
  const auto d = decompose(ProbeSpec::Multicopy(500), NoiseModel::FromStrength(0.8));
  double total = 0.0;
  for (const auto& b : d.blocks) {
    EXPECT_TRUE(std::isfinite(b.probability));
    total += b.probability;
  }
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(MulticopySumsTest, HandValues) {
  const auto one = multicopy_block_sums(2, Spin::FromTwice(2), 0.5);
  EXPECT_NEAR(one.diag_sum, 3.25, 1e-14);
  EXPECT_NEAR(one.probability, 0.8125, 1e-14);
  const auto zero = multicopy_block_sums(2, Spin::FromTwice(0), 0.5);
  EXPECT_NEAR(zero.diag_sum, 0.75, 1e-14);
  EXPECT_NEAR(zero.probability, 0.1875, 1e-14);
  // r -> 0 limit: 2j+1 times (1)^{J-j}.
  EXPECT_NEAR(multicopy_block_sums(6, Spin::FromTwice(4), 0.0).diag_sum, 5.0, 1e-14);
  EXPECT_NEAR(multicopy_block_sums(6, Spin::FromTwice(4), 1e-9).diag_sum, 5.0, 1e-7);
  for (int n : {1, 5, 12}) {
    EXPECT_NEAR(multicopy_block_sums(n, Spin::MaxForQubits(n), 1.0).probability, 1.0, 1e-14);
  }
}

TEST(MulticopySumsTest, AgreesWithDecompose) {
  for (int n = 1; n <= 30; ++n) {
    for (double r : {0.1, 0.5, 0.9}) {
      const auto d = decompose(ProbeSpec::Multicopy(n), NoiseModel::FromStrength(r));
      for (const auto& b : d.blocks) {
        const auto sums = multicopy_block_sums(n, b.j, r);
        EXPECT_NEAR(sums.probability / b.probability, 1.0, 1e-10);
      }
    }
  }
}

TEST(FullBlockMatrixTest, SingleQubit) {
  const Eigen::MatrixXd rho = full_block_matrix(ProbeSpec::Multicopy(1),
                                                NoiseModel::FromStrength(0.8), Spin::FromTwice(1));
  EXPECT_NEAR(rho(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(rho(0, 1), 0.4, 1e-15);
  EXPECT_NEAR(rho(1, 0), 0.4, 1e-15);
}

TEST(FullBlockMatrixTest, NoiselessBlockIsPureProjector) {
  const ProbeSpec probe = ProbeSpec::Multicopy(2);
  const Eigen::MatrixXd rho = full_block_matrix(probe, NoiseModel::FromStrength(1.0), Spin::FromTwice(2));
  Eigen::Vector3d c(0.5, std::sqrt(0.5), 0.5);
  EXPECT_LT((rho - c * c.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(FullBlockMatrixTest, ThreeQubitsHalfNoise) {
  const Eigen::MatrixXd rho = full_block_matrix(ProbeSpec::Multicopy(3),
                                                NoiseModel::FromStrength(0.5), Spin::FromTwice(3));
  EXPECT_NEAR(rho.trace(), 1.0, 1e-14);
  // Reference from the dense numpy projection.
  EXPECT_NEAR(rho(0, 0), 0.2, 1e-14);
  EXPECT_NEAR(rho(1, 1), 0.3, 1e-14);
  EXPECT_NEAR(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(rho).eigenvalues().minCoeff(),
              0.025, 1e-13);
  const auto d = decompose(ProbeSpec::Multicopy(3), NoiseModel::FromStrength(0.5));
  EXPECT_NEAR(d.blocks[0].probability, 0.625, 1e-14);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(rho(i, i + 1), d.blocks[0].offdiag[i], 1e-14);
}

TEST(FullBlockMatrixTest, SizeCap) {
  EXPECT_THROW(full_block_matrix(ProbeSpec::Multicopy(40), NoiseModel::FromStrength(0.5),
                                 Spin::FromTwice(40), 16),
               SizeError);
}

}  // namespace
}  // namespace probmetro
