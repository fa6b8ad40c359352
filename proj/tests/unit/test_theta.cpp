// Copyright 2026 The lrsd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lrsd/error.hpp"
#include "lrsd/theta.hpp"
#include "oracles.hpp"

namespace lrsd {
namespace {

struct Dataset {
  std::vector<double> a;
  double xi, rho, delta;
};

// Magnitudes straddling xi*rho so both capped and uncapped entries occur.
Dataset RandomDataset(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Dataset d;
  d.xi = 0.05 + u(gen);
  d.rho = 0.05 + 2.0 * u(gen);
  const int n = 1 + static_cast<int>(u(gen) * 40);
  const double scale = d.xi * d.rho * (0.5 + 4.0 * u(gen));
  for (int i = 0; i < n; ++i) d.a.push_back(scale * std::pow(u(gen), 2.0));
  double norm = 0.0;
  for (double v : d.a) norm += v * v;
  d.delta = std::sqrt(norm) * (0.001 + 0.99 * u(gen));
  return d;
}

TEST(Theta, MatchesBisectionOracleOnFixedCase) {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<double> a(25);
  for (double& v : a) v = u(gen);
  const double xi = 0.2, rho = 0.7, delta = 0.3;
  const double theta = FindTheta(a, xi, rho, delta);
  const double ref = oracle::BisectTheta(a, xi, rho, delta);
  EXPECT_NEAR(theta, ref, 1e-9 * ref);
  EXPECT_NEAR(oracle::NaivePhi(a, xi, rho, theta), delta, 1e-9 * std::max(1.0, delta));
}

TEST(Theta, RandomDatasetsAgreeWithOracle) {
  std::mt19937_64 gen(32);
  for (int trial = 0; trial < 300; ++trial) {
    const Dataset d = RandomDataset(gen);
    const double theta = FindTheta(d.a, d.xi, d.rho, d.delta);
    const double ref = oracle::BisectTheta(d.a, d.xi, d.rho, d.delta);
    ASSERT_GT(theta, 0.0);
    EXPECT_NEAR(theta, ref, 1e-9 * ref) << "trial " << trial;
    EXPECT_LE(std::abs(oracle::NaivePhi(d.a, d.xi, d.rho, theta) - d.delta),
              1e-9 * std::max(1.0, d.delta));
  }
}

TEST(Theta, QuarticPathAgrees) {
  std::mt19937_64 gen(33);
  ThetaOptions quartic;
  quartic.use_quartic = true;
  for (int trial = 0; trial < 200; ++trial) {
    const Dataset d = RandomDataset(gen);
    const double a = FindTheta(d.a, d.xi, d.rho, d.delta);
    const double b = FindTheta(d.a, d.xi, d.rho, d.delta, quartic);
    EXPECT_NEAR(a, b, 1e-9 * a);
  }
}

TEST(Theta, SlackConstraintGivesZero) {
  const std::vector<double> a = {0.1, 0.2, 0.2};
  EXPECT_EQ(FindTheta(a, 0.5, 1.0, 0.30001), 0.0);
  EXPECT_EQ(FindTheta(a, 0.5, 1.0, 0.31), 0.0);
  EXPECT_EQ(FindTheta(std::vector<double>{}, 0.5, 1.0, 0.1), 0.0);
}

TEST(Theta, NeverCappedClosedForm) {
  // Every a <= xi rho: phi = ||a|| / (1 + rho theta).
  const std::vector<double> a = {0.1, 0.3, 0.2, 0.05};
  const double xi = 1.0, rho = 0.5, delta = 0.1;
  const ThetaSearch s(a, xi, rho);
  EXPECT_EQ(s.never_capped(), 4);
  const double norm = std::sqrt(0.01 + 0.09 + 0.04 + 0.0025);
  EXPECT_NEAR(s.norm(), norm, 1e-15);
  EXPECT_NEAR(s.Solve(delta), (norm / delta - 1.0) / rho, 1e-14);
}

TEST(Theta, AllCappedClosedForm) {
  // Equal large magnitudes and a tiny delta: every entry capped at the root,
  // phi = sqrt(N) xi / theta.
  const std::vector<double> a(9, 10.0);
  const double xi = 0.3, rho = 0.2, delta = 0.05;
  const double expect = xi * 3.0 / delta;
  ASSERT_LE(xi / expect, 10.0 / (1.0 + rho * expect));
  EXPECT_NEAR(FindTheta(a, xi, rho, delta), expect, 1e-14 * expect);
}

TEST(Theta, PrefixPhiEqualsDirect) {
  std::mt19937_64 gen(34);
  std::uniform_real_distribution<double> u(-6.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset d = RandomDataset(gen);
    const ThetaSearch s(d.a, d.xi, d.rho);
    for (int k = 0; k < 10; ++k) {
      const double theta = std::pow(10.0, u(gen));
      const double ref = oracle::NaivePhi(d.a, d.xi, d.rho, theta);
      EXPECT_NEAR(s.Phi(theta), ref, 1e-12 * std::max(1.0, ref));
      EXPECT_NEAR(PhiDirect(d.a, d.xi, d.rho, theta), ref, 1e-12 * std::max(1.0, ref));
    }
  }
}

TEST(Theta, SegmentLocationIsConsistent) {
  std::mt19937_64 gen(35);
  for (int trial = 0; trial < 100; ++trial) {
    const Dataset d = RandomDataset(gen);
    const ThetaSearch s(d.a, d.xi, d.rho);
    const double theta = s.Solve(d.delta);
    const Index j = s.LocateSegment(d.delta);
    EXPECT_NEAR(s.SegmentPhi(j, theta), d.delta, 1e-9 * std::max(1.0, d.delta));
    // Larger magnitudes cap sooner: breakpoints fall as j grows.
    for (Index k = s.never_capped() + 2; k <= s.size(); ++k)
      EXPECT_GE(s.Breakpoint(k - 1), s.Breakpoint(k));
    if (j < s.size()) EXPECT_LE(s.Breakpoint(j + 1), theta * (1.0 + 1e-12));
    if (j > s.never_capped()) EXPECT_GE(s.Breakpoint(j), theta * (1.0 - 1e-12));
  }
}

TEST(Theta, RejectsBadInput) {
  const std::vector<double> a = {1.0};
  EXPECT_THROW(ThetaSearch(a, 0.0, 1.0), InvalidArgument);
  EXPECT_THROW(ThetaSearch(a, 1.0, -1.0), InvalidArgument);
  const std::vector<double> bad = {std::nan("")};
  EXPECT_THROW(ThetaSearch(bad, 1.0, 1.0), InvalidArgument);
  EXPECT_THROW(FindTheta(a, 1.0, 1.0, 0.0), InvalidArgument);
}

TEST(Quartic, KnownRoots) {
  // (x-1)(x-2)(x+3)(x-0.5) = x^4 - 0.5x^3 - 7x^2 + 9.5x - 3
  std::vector<double> r = RealQuarticRoots(1.0, -0.5, -7.0, 9.5, -3.0);
  std::sort(r.begin(), r.end());
  ASSERT_EQ(r.size(), 4u);
  EXPECT_NEAR(r[0], -3.0, 1e-10);
  EXPECT_NEAR(r[1], 0.5, 1e-10);
  EXPECT_NEAR(r[2], 1.0, 1e-10);
  EXPECT_NEAR(r[3], 2.0, 1e-10);
  // x^4 + 1 has no real roots.
  EXPECT_TRUE(RealQuarticRoots(1.0, 0.0, 0.0, 0.0, 1.0).empty());
}

}  // namespace
}  // namespace lrsd
