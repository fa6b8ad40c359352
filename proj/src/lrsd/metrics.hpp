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

// Recovery metrics against ground truth and the l1 post-processing of S.

#pragma once

#include <span>

#include "lrsd/problems.hpp"

namespace lrsd {

struct RecoveryMetrics {
  double rel_l = 0.0;
  double rel_s = 0.0;
  // Set when the reference norm is zero and the value is an absolute error.
  bool l_absolute = false;
  bool s_absolute = false;
};

// relL = ||L - L0||_F/||L0||_F over all entries. relS compares S with S0 on
// the observed entries only; for a full mask that is every entry.
RecoveryMetrics ComputeMetrics(const Matrix& low_rank, const Matrix& sparse,
                               const GroundTruth& truth,
                               const ObservationMask& mask);

// argmin ||pi(S)||_1 s.t. ||pi(S + L - D)||_F <= delta, zero off the mask.
// With R = pi(D - L) the answer is shrink_entries(R, t) where t solves
// ||min(|R|, t)||_F = delta, or 0 when ||R||_F <= delta.
Matrix PostprocessS(const Matrix& low_rank, const Matrix& data, double delta,
                    const ObservationMask& mask);

// The level t used above (0 when the constraint is slack at S = 0).
double PostprocessLevel(std::span<const double> magnitudes, double delta);

}  // namespace lrsd
