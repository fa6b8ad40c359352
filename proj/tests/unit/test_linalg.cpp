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

#include <cmath>
#include <random>

#include "lrsd/error.hpp"
#include "lrsd/linalg.hpp"
#include "oracles.hpp"

namespace lrsd {
namespace {

using oracle::RandomMatrix;

TEST(ShrinkEntries, ScalarCases) {
  Matrix x(1, 4);
  x << 2.0, -2.0, 0.3, -0.3;
  const Matrix s = ShrinkEntries(x, 0.5);
  EXPECT_DOUBLE_EQ(s(0), 1.5);
  EXPECT_DOUBLE_EQ(s(1), -1.5);
  EXPECT_EQ(s(2), 0.0);
  EXPECT_EQ(s(3), 0.0);
  EXPECT_EQ(ShrinkEntries(x, 0.0), x);
  EXPECT_THROW(ShrinkEntries(x, -1.0), InvalidArgument);
}

TEST(ShrinkEntries, BeatsGridAroundIt) {
  std::mt19937_64 gen(11);
  const Matrix x = RandomMatrix(gen, 3, 3);
  const double t = 0.7;
  const Matrix s = ShrinkEntries(x, t);
  auto obj = [&](const Matrix& v) {
    return t * v.cwiseAbs().sum() + 0.5 * (v - x).squaredNorm();
  };
  const double best = obj(s);
  // Separable objective: probe each coordinate on a 0.01 grid.
  for (Index k = 0; k < x.size(); ++k) {
    for (int step = -100; step <= 100; ++step) {
      Matrix p = s;
      p(k) += 0.01 * step;
      EXPECT_GE(obj(p), best - 1e-14);
    }
  }
}

TEST(ShrinkSingular, RankOneAnalytic) {
  Vector u = Vector::LinSpaced(5, 1.0, 5.0).normalized();
  Vector v = Vector::LinSpaced(4, -1.0, 2.0).normalized();
  const Matrix x = 4.0 * u * v.transpose();
  const Matrix y = ShrinkSingular(x, 1.0);
  EXPECT_LT((y - 3.0 * u * v.transpose()).norm(), 1e-12);
  EXPECT_LT((y - oracle::JacobiShrink(x, 1.0)).norm(), 1e-12);
  EXPECT_LT(ShrinkSingular(x, 5.0).norm(), 1e-14);
}

TEST(ShrinkSingular, MatchesJacobiOracle) {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = RandomMatrix(gen, 9, 7);
    const double t = 0.5 + 0.2 * trial;
    SvdStats stats;
    const Matrix y = ShrinkSingular(x, t, &stats);
    EXPECT_LT((y - oracle::JacobiShrink(x, t)).norm(), 1e-10);
    EXPECT_EQ(stats.svd_count, 1);
  }
}

TEST(PartialSvd, ThresholdZeroMatchesFullSvd) {
  std::mt19937_64 gen(13);
  const Matrix x = RandomMatrix(gen, 20, 15);
  const SvdFactors f = PartialSvd(x, 0.0);
  const Vector ref = oracle::JacobiSingularValues(x);
  ASSERT_EQ(f.count(), 15);
  EXPECT_LT((f.values - ref).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((f.Reconstruct() - x).norm(), 1e-10);
  // Orthonormal factors; subspace angles via the projector difference.
  EXPECT_LT((f.left.transpose() * f.left - Matrix::Identity(15, 15)).norm(), 1e-10);
  EXPECT_LT((f.right.transpose() * f.right - Matrix::Identity(15, 15)).norm(), 1e-10);
  Eigen::JacobiSVD<Matrix> jac(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  for (Index k = 0; k < 15; ++k) {
    const double cosine = std::abs(f.left.col(k).dot(jac.matrixU().col(k)));
    EXPECT_NEAR(cosine, 1.0, 1e-8);
  }
}

TEST(PartialSvd, ThresholdKeepsOnlyLargeValues) {
  std::mt19937_64 gen(14);
  const Matrix x = RandomMatrix(gen, 12, 10);
  const Vector ref = oracle::JacobiSingularValues(x);
  const double threshold = 0.5 * (ref(2) + ref(3));
  const SvdFactors f = PartialSvd(x, threshold);
  ASSERT_EQ(f.count(), 3);
  EXPECT_LT((f.values - ref.head(3)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(PartialSvd, LanczosAgreesWithDense) {
  std::mt19937_64 gen(15);
  const Matrix low = RandomMatrix(gen, 80, 6) * RandomMatrix(gen, 6, 60);
  const Matrix x = low + 0.01 * RandomMatrix(gen, 80, 60);
  SvdOptions lanczos;
  lanczos.method = SvdMethod::kLanczos;
  lanczos.initial_subspace = 4;
  SvdOptions dense;
  dense.method = SvdMethod::kDense;
  const double threshold = 1.0;
  const SvdFactors a = PartialSvd(x, threshold, lanczos);
  const SvdFactors b = PartialSvd(x, threshold, dense);
  ASSERT_EQ(a.count(), b.count());
  EXPECT_EQ(a.count(), 6);
  EXPECT_LT((a.values - b.values).cwiseAbs().maxCoeff(), 1e-9 * b.values(0));
  EXPECT_LT((a.Reconstruct() - b.Reconstruct()).norm(), 1e-8 * x.norm());
}

TEST(PartialSvd, ZeroMatrixAndBadInput) {
  EXPECT_EQ(PartialSvd(Matrix::Zero(4, 3), 0.0).count(), 0);
  Matrix bad = Matrix::Ones(2, 2);
  bad(0, 1) = std::nan("");
  EXPECT_THROW(PartialSvd(bad, 0.0), InvalidArgument);
  EXPECT_THROW(PartialSvd(Matrix::Ones(2, 2), -1.0), InvalidArgument);
}

TEST(ProjectMask, SelfAdjointAndIdempotent) {
  std::mt19937_64 gen(16);
  std::vector<ObservationMask::Entry> entries = {{0, 0}, {1, 2}, {3, 1}, {2, 2}};
  const auto mask = ObservationMask::FromEntries(4, 3, entries);
  const Matrix x = RandomMatrix(gen, 4, 3);
  const Matrix y = RandomMatrix(gen, 4, 3);
  const Matrix px = ProjectMask(x, mask);
  EXPECT_NEAR(px.cwiseProduct(y).sum(),
              x.cwiseProduct(ProjectMask(y, mask)).sum(), 1e-13);
  EXPECT_EQ(ProjectMask(px, mask), px);
  EXPECT_EQ(px + mask.ProjectComplement(x), x);
  EXPECT_EQ(ProjectMask(x, ObservationMask::Full(4, 3)), x);
  EXPECT_THROW(ProjectMask(Matrix::Zero(3, 3), mask), DimensionMismatch);
}

TEST(ObservationMask, RejectsBadEntries) {
  EXPECT_THROW(ObservationMask::FromEntries(2, 2, {{2, 0}}), InvalidArgument);
  EXPECT_THROW(ObservationMask::FromEntries(2, 2, {}), InvalidArgument);
  const auto m = ObservationMask::FromEntries(2, 2, {{1, 1}, {0, 0}, {1, 1}});
  EXPECT_EQ(m.size(), 2);
  EXPECT_FALSE(m.is_full());
  EXPECT_TRUE(ObservationMask::FromEntries(1, 2, {{0, 0}, {0, 1}}).is_full());
}

TEST(Norms, AgreeWithOracles) {
  std::mt19937_64 gen(17);
  const Matrix x = RandomMatrix(gen, 10, 10);
  const Norms n = ComputeNorms(x);
  const Vector sv = oracle::JacobiSingularValues(x);
  EXPECT_NEAR(n.nuclear, sv.sum(), 1e-10);
  EXPECT_NEAR(n.spectral, sv(0), 1e-10);
  EXPECT_NEAR(n.frobenius, std::sqrt(sv.squaredNorm()), 1e-10);
  EXPECT_DOUBLE_EQ(n.l1, x.cwiseAbs().sum());
  EXPECT_DOUBLE_EQ(n.linf, x.cwiseAbs().maxCoeff());
  EXPECT_NEAR(NuclearNorm(x), sv.sum(), 1e-10);
  EXPECT_NEAR(SpectralNorm(x), sv(0), 1e-10);
  const auto mask = ObservationMask::FromEntries(10, 10, {{0, 0}, {5, 5}});
  EXPECT_DOUBLE_EQ(MaskedL1(x, mask), std::abs(x(0, 0)) + std::abs(x(5, 5)));
}

}  // namespace
}  // namespace lrsd
