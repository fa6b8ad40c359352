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

#include "lrsd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lrsd/error.hpp"

namespace lrsd {

RecoveryMetrics ComputeMetrics(const Matrix& low_rank, const Matrix& sparse,
                               const GroundTruth& truth,
                               const ObservationMask& mask) {
  if (low_rank.rows() != truth.low_rank.rows() ||
      low_rank.cols() != truth.low_rank.cols() ||
      sparse.rows() != truth.sparse.rows() ||
      sparse.cols() != truth.sparse.cols() ||
      mask.rows() != low_rank.rows() || mask.cols() != low_rank.cols())
    throw DimensionMismatch("metrics: shapes differ from ground truth");
  RecoveryMetrics m;
  const double l_err = (low_rank - truth.low_rank).norm();
  const double l_ref = truth.low_rank.norm();
  m.l_absolute = l_ref == 0.0;
  m.rel_l = m.l_absolute ? l_err : l_err / l_ref;

  const double s_err = mask.Project(sparse - truth.sparse).norm();
  const double s_ref = mask.Project(truth.sparse).norm();
  m.s_absolute = s_ref == 0.0;
  m.rel_s = m.s_absolute ? s_err : s_err / s_ref;
  return m;
}

double PostprocessLevel(std::span<const double> magnitudes, double delta) {
  std::vector<double> a(magnitudes.begin(), magnitudes.end());
  for (double& v : a) v = std::abs(v);
  std::sort(a.begin(), a.end());
  const std::size_t n = a.size();
  // psi(t)^2 = P_j + (n - j) t^2 with j = #{a <= t}; psi(a_(j))^2 is
  // nondecreasing in j, so the level lies past the last j with psi <= delta.
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + a[i] * a[i];
  if (std::sqrt(prefix[n]) <= delta) return 0.0;
  const double d2 = delta * delta;
  std::size_t lo = 0, hi = n;  // psi(a_(lo)) <= delta < psi(a_(hi))
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const double psi2 = prefix[mid] + static_cast<double>(n - mid) *
                                          a[mid - 1] * a[mid - 1];
    if (psi2 <= d2)
      lo = mid;
    else
      hi = mid;
  }
  return std::sqrt(std::max(0.0, d2 - prefix[lo]) /
                   static_cast<double>(n - lo));
}

Matrix PostprocessS(const Matrix& low_rank, const Matrix& data, double delta,
                    const ObservationMask& mask) {
  if (low_rank.rows() != data.rows() || low_rank.cols() != data.cols() ||
      mask.rows() != data.rows() || mask.cols() != data.cols())
    throw DimensionMismatch("postprocess: shapes differ");
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw InvalidArgument("postprocess needs a positive delta");
  const Matrix r = mask.Project(data - low_rank);
  const Vector mags = mask.GatherAbs(r);
  const double t =
      PostprocessLevel(std::span<const double>(mags.data(), mags.size()), delta);
  if (t == 0.0) return Matrix::Zero(data.rows(), data.cols());
  return ShrinkEntries(r, t);
}

}  // namespace lrsd
