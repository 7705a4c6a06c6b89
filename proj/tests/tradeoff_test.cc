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
#include "probmetro/tradeoff.h"

#include <cmath>

#include <gtest/gtest.h>

#include "probmetro/asymptotics.h"
#include "probmetro/errors.h"

namespace probmetro {
namespace {

BlockDecomposition multicopy(int n, double r) {
  return decompose(ProbeSpec::Multicopy(n), NoiseModel::FromStrength(r));
}

TEST(TradeoffTest, FullSuccessIsDeterministic) {
  const auto d = multicopy(12, 0.7);
  const TradeoffPoint p = global_tradeoff(d, 1.0);
  double det = 0.0;
  for (const auto& b : d.blocks) det += b.probability * deterministic_block_precision(b);
  EXPECT_NEAR(p.sigma2, det, 1e-13);
  EXPECT_NEAR(p.F, 1.0 - det / 4, 1e-13);
  EXPECT_EQ(p.S_bar, 0.0);
  for (const auto& a : p.blocks) EXPECT_NEAR(a.s, 1.0, 1e-13);
}

// ln S* of maximal-block post-selection falls like -n ln 2, reached slowly.
TEST(CriticalSuccessTest, MaxBlockScaling) {
  auto slope = [](int lo, int hi) {
    std::vector<double> x, y;
    for (int n = lo; n <= hi; n += 10) {
      x.push_back(n);
      y.push_back(std::log(TradeoffSolver(multicopy(n, 0.8)).critical_success(CriticalMode::kMaxBlock)));
    }
    return fit_slope(x, y) / -std::log(2.0);
  };
  const double early = slope(30, 60);
  const double late = slope(200, 260);
  EXPECT_NEAR(early, 0.904, 0.005);
  EXPECT_GT(late, early);
  EXPECT_NEAR(late, 1.0, 0.03);
}

TEST(TradeoffTest, SingleQubitNeverBenefits) {
  const auto d = multicopy(1, 0.8);
  EXPECT_NEAR(critical_success(d, CriticalMode::kPerBlock), 1.0, 1e-14);
  EXPECT_NEAR(critical_success(d, CriticalMode::kMaxBlock), 1.0, 1e-14);
  for (double S : {1.0, 0.6, 0.01}) EXPECT_NEAR(global_tradeoff(d, S).sigma2, 1.2, 1e-14);
}

TEST(TradeoffTest, SixQubitCurveMatchesReferenceSdp) {
  // cvxpy/Clarabel solution of the block SDP.
  const auto d = multicopy(6, 0.8);
  const TradeoffSolver solver(d);
  const std::pair<double, double> reference[] = {
      {0.0, 0.3163006017205806}, {0.1, 0.27519955828973336}, {0.3, 0.24827670423691747},
      {0.5, 0.22452263694229974}, {0.7, 0.223965378185367}};
  for (const auto& [s_bar, sigma2] : reference) {
    const TradeoffPoint p = solver.solve(1.0 - s_bar);
    EXPECT_NEAR(p.sigma2, sigma2, 1e-8) << s_bar;
    EXPECT_NEAR(p.S, 1.0 - s_bar, 1e-12);
    double total = 0.0;
    for (const auto& a : p.blocks) total += a.p * a.s;
    EXPECT_NEAR(total, 1.0 - s_bar, 1e-9);
  }
}

TEST(TradeoffTest, CriticalSuccessBothModes) {
  const auto d = multicopy(6, 0.8);
  EXPECT_NEAR(critical_success(d, CriticalMode::kPerBlock), 0.8258424781353869, 1e-12);
  EXPECT_NEAR(critical_success(d, CriticalMode::kMaxBlock),
              0.5978710000000002 * 0.7257744197918726, 1e-12);
}

TEST(TradeoffTest, PlateauBelowMaxBlockCritical) {
  for (int n : {6, 15, 30}) {
    const auto d = multicopy(n, 0.8);
    const TradeoffSolver solver(d);
    const double s_star = solver.critical_success(CriticalMode::kMaxBlock);
    const double at = solver.solve(s_star).sigma2;
    for (double f : {0.9, 0.5, 0.01}) EXPECT_NEAR(solver.solve(s_star * f).sigma2, at, 1e-8);
    EXPECT_NEAR(at, solver.models().front().ground_energy, 1e-10);
    EXPECT_GT(solver.solve(std::min(1.0, s_star * 1.2)).sigma2, at + 1e-9);
  }
}

TEST(TradeoffTest, CurveIsMonotone) {
  const auto d = multicopy(40, 0.8);
  const auto grid = default_s_grid(48);
  const auto curve = tradeoff_curve(d, grid, TradeoffOptions{2});
  ASSERT_EQ(curve.size(), grid.size());
  for (std::size_t i = 1; i < curve.size(); ++i) {
    EXPECT_LE(curve[i].sigma2, curve[i - 1].sigma2 + 1e-12) << grid[i];
  }
}

TEST(TradeoffTest, AllocationIsConsistentWithFilters) {
  const auto d = multicopy(20, 0.6);
  const TradeoffPoint p = global_tradeoff(d, 0.4);
  double success = 0.0;
  double coherence = 0.0;
  for (const auto& b : d.blocks) {
    const BlockFilter* f = p.filter.find(b.j);
    ASSERT_NE(f, nullptr);
    for (double v : f->f) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    success += b.probability * filter_success(b, *f);
    coherence += b.probability * filter_coherence(b, *f);
  }
  EXPECT_NEAR(success, 0.4, 1e-9);
  EXPECT_NEAR(2.0 - 2.0 * coherence / success, p.sigma2, 1e-9);
}

TEST(TradeoffTest, SmallSuccessApproachesUltimate) {
  const auto d = multicopy(30, 0.8);
  const TradeoffSolver solver(d);
  EXPECT_NEAR(solver.solve(1e-12).sigma2, solver.models().front().ground_energy, 1e-10);
}

TEST(TradeoffTest, RejectsBadSuccess) {
  const auto d = multicopy(3, 0.5);
  EXPECT_THROW(global_tradeoff(d, 0.0), DomainError);
  EXPECT_THROW(global_tradeoff(d, 1.5), DomainError);
}

TEST(SGridTest, Specs) {
  EXPECT_EQ(parse_s_grid("uniform:4"), (std::vector<double>{0.0, 0.25, 0.5, 0.75}));
  EXPECT_EQ(parse_s_grid("list:0.5,0.1"), (std::vector<double>{0.1, 0.5}));
  EXPECT_EQ(parse_s_grid("uniform:3:0.2:0.4").size(), 3u);
  const auto geom = parse_s_grid("geom:3:0.001:0.1");
  ASSERT_EQ(geom.size(), 3u);
  EXPECT_NEAR(geom[0], 0.9, 1e-15);
  EXPECT_NEAR(geom[2], 0.999, 1e-15);
  EXPECT_EQ(parse_s_grid("list:0.5+list:0.5,0.2").size(), 2u);
  EXPECT_EQ(parse_s_grid("default").size(), 64u);
  EXPECT_EQ(parse_s_grid("default:16").size(), 16u);
  const auto def = default_s_grid(64);
  EXPECT_EQ(def.front(), 0.0);
  EXPECT_NEAR(def.back(), 1.0 - 1e-4, 1e-12);
}

TEST(SGridTest, Errors) {
  EXPECT_THROW(parse_s_grid(""), ValidationError);
  EXPECT_THROW(parse_s_grid("uniform"), ValidationError);
  EXPECT_THROW(parse_s_grid("uniform:0"), ValidationError);
  EXPECT_THROW(parse_s_grid("list:1.0"), ValidationError);
  EXPECT_THROW(parse_s_grid("list:abc"), ValidationError);
  EXPECT_THROW(parse_s_grid("geom:3:0:0.1"), ValidationError);
  EXPECT_THROW(parse_s_grid("banana:3"), ValidationError);
}

TEST(ScavengeTest, FullSuccessHasNoFailureBranch) {
  const auto d = multicopy(10, 0.8);
  const TradeoffPoint p = global_tradeoff(d, 1.0);
  const ScavengeReport rep = scavenged_precision(d, 1.0, p.filter);
  EXPECT_FALSE(rep.sigma2_fail.has_value());
  EXPECT_NEAR(rep.sigma2_all, rep.sigma2_success, 1e-15);
  EXPECT_TRUE(rep.gentle.holds);
}

TEST(ScavengeTest, FiftyQubits) {
  const auto d = multicopy(50, 0.8);
  const TradeoffSolver solver(d);
  for (double S : {0.9, 0.5, 0.1, 1e-2, 1e-3}) {
    const TradeoffPoint p = solver.solve(S);
    const ScavengeReport rep = scavenged_precision(d, S, p.filter);
    ASSERT_TRUE(rep.sigma2_fail.has_value());
    EXPECT_GE(rep.sigma2_all, rep.sigma2_det - 1e-12) << S;
    EXPECT_TRUE(rep.gentle.holds) << S;
    EXPECT_NEAR(rep.sigma2_all, S * rep.sigma2_success + (1 - S) * *rep.sigma2_fail, 1e-12);
    if (S == 1e-3) {
      EXPECT_LE(rep.F_det - *rep.F_fail, 1.415e-3);
      EXPECT_NEAR(*rep.sigma2_fail / rep.sigma2_det, 1.0, 0.02);
    }
  }
}

TEST(ScavengeTest, RejectsMismatchedProfile) {
  const auto d = multicopy(10, 0.8);
  const TradeoffPoint p = global_tradeoff(d, 0.5);
  EXPECT_THROW(scavenged_precision(d, 0.6, p.filter), ValidationError);
  EXPECT_THROW(scavenged_precision(d, 0.5, FilterProfile{}), ValidationError);
}

TEST(GentleBoundTest, Margins) {
  EXPECT_TRUE(gentle_bound_check(0.9, 0.9, 1.0).holds);
  EXPECT_FALSE(gentle_bound_check(0.9, 0.8, 0.01).holds);
  EXPECT_NEAR(gentle_bound_check(0.9, 0.89, 0.01).margin, std::sqrt(2.0) * 0.01 - 0.01, 1e-15);
}

}  // namespace
}  // namespace probmetro
