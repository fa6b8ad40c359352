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

#include "lrsd/error.hpp"
#include "lrsd/metrics.hpp"
#include "lrsd/pspg.hpp"

namespace lrsd {
namespace {

TEST(Pspg, RankOneNoiselessRecovery) {
  GeneratorSpec spec;
  spec.rows = spec.cols = 20;
  spec.rank_ratio = 0.05;
  spec.sparsity_ratio = 0.0;
  spec.seed = 5;
  const Instance inst = Generate(spec);
  ASSERT_EQ(inst.delta, 0.0);
  const DecompositionResult r = SolvePspg(inst, PspgConfig{});
  EXPECT_TRUE(r.converged);
  EXPECT_LE(ComputeMetrics(r.low_rank, r.sparse, *inst.truth, inst.mask).rel_l, 1e-6);
}

TEST(Pspg, NoisyIteratesStayFeasible) {
  const Instance inst = GenerateSpcp(80, 0.05, 0.05, 45.0, 2);
  PspgConfig cfg;
  cfg.verify = true;
  const DecompositionResult r = SolvePspg(inst, cfg);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.infeasibility, inst.delta * (1.0 + 1e-9));
  EXPECT_LE(r.max_subproblem_residual, 1e-8);
  const auto m = ComputeMetrics(r.low_rank, r.sparse, *inst.truth, inst.mask);
  EXPECT_LE(m.rel_l, 5e-2);
  // Smoothing parameter shrinks then freezes after k_bar iterations.
  ASSERT_GE(r.trace.size(), 2u);
  EXPECT_LT(r.trace[1].rho, r.trace[0].rho);
}

TEST(Pspg, FixedIterationCount) {
  const Instance inst = GenerateSpcp(40, 0.1, 0.05, 60.0, 1);
  PspgConfig cfg;
  cfg.fixed_iterations = 7;
  const DecompositionResult r = SolvePspg(inst, cfg);
  EXPECT_EQ(r.iterations, 7);
  EXPECT_EQ(r.svd.svd_count, 7);
}

TEST(Pspg, QuarticOptionGivesSameAnswer) {
  const Instance inst = GenerateSpcp(40, 0.1, 0.05, 45.0, 8);
  PspgConfig a, b;
  b.use_quartic = true;
  const DecompositionResult ra = SolvePspg(inst, a);
  const DecompositionResult rb = SolvePspg(inst, b);
  EXPECT_LT((ra.low_rank - rb.low_rank).norm(), 1e-6 * ra.low_rank.norm());
}

TEST(Pspg, MissingDataNoisy) {
  GeneratorSpec spec;
  spec.rows = spec.cols = 60;
  spec.rank_ratio = 0.05;
  spec.sample_ratio = 0.8;
  spec.seed = 9;
  Instance inst = Generate(spec);
  inst.delta = 1e-3;
  PspgConfig cfg;
  cfg.verify = true;
  const DecompositionResult r = SolvePspg(inst, cfg);
  EXPECT_LE(r.infeasibility, inst.delta * (1.0 + 1e-9));
  EXPECT_LE(r.max_subproblem_residual, 1e-8);
  EXPECT_EQ(inst.mask.ProjectComplement(r.low_rank + r.sparse).norm(), 0.0);
}

TEST(Pspg, RejectsBadConfig) {
  PspgConfig cfg;
  cfg.eta = 0.0;
  EXPECT_THROW(ValidatePspgConfig(cfg), InvalidConfig);
  cfg = PspgConfig{};
  cfg.stop_factor = -1.0;
  EXPECT_THROW(ValidatePspgConfig(cfg), InvalidConfig);
}

}  // namespace
}  // namespace lrsd
