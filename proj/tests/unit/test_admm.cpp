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

#include <random>

#include "lrsd/admm.hpp"
#include "lrsd/error.hpp"
#include "lrsd/metrics.hpp"
#include "oracles.hpp"

namespace lrsd {
namespace {

double LagrangianInL(const Matrix& l, const Matrix& s, const Matrix& lam,
                     const Matrix& d, double rho) {
  return oracle::JacobiSingularValues(l).sum() - lam.cwiseProduct(l).sum() +
         (l + s - d).squaredNorm() / (2.0 * rho);
}

TEST(Admm, LowRankStepBeatsRandomProbes) {
  std::mt19937_64 gen(61);
  const Matrix s = oracle::RandomMatrix(gen, 6, 6);
  const Matrix lam = oracle::RandomMatrix(gen, 6, 6, 0.3);
  const Matrix d = oracle::RandomMatrix(gen, 6, 6, 2.0);
  const double rho = 0.8;
  const Matrix l = ArgminLowRank(s, lam, d, rho);
  const double best = LagrangianInL(l, s, lam, d, rho);
  for (int k = 0; k < 200; ++k) {
    const Matrix p = l + oracle::RandomMatrix(gen, 6, 6, 1e-3 * (1 + k % 10));
    EXPECT_GE(LagrangianInL(p, s, lam, d, rho), best - 1e-12);
  }
}

TEST(Admm, SparseStepSubgradientCondition) {
  std::mt19937_64 gen(62);
  const Matrix l = oracle::RandomMatrix(gen, 7, 5);
  const Matrix lam = oracle::RandomMatrix(gen, 7, 5, 0.5);
  const Matrix d = oracle::RandomMatrix(gen, 7, 5, 2.0);
  const double rho = 0.6, xi = 0.4;
  const Matrix s = ArgminSparse(l, lam, d, rho, xi);
  for (Index k = 0; k < s.size(); ++k) {
    const double smooth = -lam(k) + (l(k) + s(k) - d(k)) / rho;
    if (s(k) != 0.0) {
      EXPECT_NEAR(xi * Sign(s(k)) + smooth, 0.0, 1e-12);
    } else {
      EXPECT_LE(std::abs(smooth), xi + 1e-12);
    }
  }
}

TEST(Admm, RankOneRecovery) {
  GeneratorSpec spec;
  spec.rows = spec.cols = 20;
  spec.rank_ratio = 0.05;
  spec.sparsity_ratio = 0.0;
  spec.seed = 3;
  const Instance inst = Generate(spec);
  ASSERT_EQ(inst.truth->rank, 1);
  for (bool exact : {false, true}) {
    const DecompositionResult r =
        exact ? SolveEadm(inst, AdmmConfig::EadmDefaults())
              : SolveIadm(inst, AdmmConfig::IadmDefaults());
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.iterations, 60);
    const auto m = ComputeMetrics(r.low_rank, r.sparse, *inst.truth, inst.mask);
    EXPECT_LE(m.rel_l, 1e-6) << r.solver;
  }
}

TEST(Admm, RecoversSmallInstanceAndEadmUsesMoreSvds) {
  const Instance inst = GenerateRpcpMissing(100, 0.05, 0.05, 1.0, 5);
  const DecompositionResult i = SolveIadm(inst, AdmmConfig::IadmDefaults());
  const DecompositionResult e = SolveEadm(inst, AdmmConfig::EadmDefaults());
  for (const auto* r : {&i, &e}) {
    EXPECT_TRUE(r->converged);
    EXPECT_LT(r->relative_infeasibility, 1e-7);
    const auto m = ComputeMetrics(r->low_rank, r->sparse, *inst.truth, inst.mask);
    EXPECT_LE(m.rel_l, 1e-4) << r->solver;
    EXPECT_LE(m.rel_s, 1e-3) << r->solver;
    ASSERT_TRUE(r->multiplier.has_value());
  }
  EXPECT_GT(e.svd.svd_count, i.svd.svd_count);
  EXPECT_NEAR(i.objective, e.objective, 1e-5 * e.objective);
}

TEST(Admm, ZeroDataStopsImmediately) {
  const Instance inst = MakeInstance(Matrix::Zero(4, 4), ObservationMask::Full(4, 4));
  const DecompositionResult r = SolveIadm(inst, AdmmConfig::IadmDefaults());
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.low_rank.norm(), 0.0);
  EXPECT_EQ(r.sparse.norm(), 0.0);
}

TEST(Admm, RejectsUnsupportedInputs) {
  const Instance missing = GenerateRpcpMissing(20, 0.1, 0.05, 0.5, 1);
  EXPECT_THROW(SolveIadm(missing, AdmmConfig::IadmDefaults()), InvalidArgument);
  Instance noisy = GenerateRpcpMissing(20, 0.1, 0.05, 1.0, 1);
  noisy.delta = 0.1;
  EXPECT_THROW(SolveEadm(noisy, AdmmConfig::EadmDefaults()), InvalidArgument);
  AdmmConfig bad = AdmmConfig::IadmDefaults();
  bad.eta = 1.5;
  EXPECT_THROW(ValidateAdmmConfig(bad), InvalidConfig);
}

}  // namespace
}  // namespace lrsd
