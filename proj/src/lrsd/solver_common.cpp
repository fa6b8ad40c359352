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

#include "lrsd/solver_common.hpp"

namespace lrsd {

double RpcaObjective(const Matrix& low_rank, const Matrix& sparse, double xi,
                     const ObservationMask& mask) {
  return NuclearNorm(low_rank) + xi * MaskedL1(sparse, mask);
}

void FinalizeResult(const Instance& instance, DecompositionResult& result) {
  const Matrix observed = instance.ObservedData();
  Eigen::BDCSVD<Matrix> svd(result.low_rank);
  const Vector& sigma = svd.singularValues();
  result.objective =
      sigma.sum() + instance.xi * MaskedL1(result.sparse, instance.mask);
  const double tol = sigma.size() ? 1e-9 * std::max(sigma(0), 1e-300) : 0.0;
  result.rank = (sigma.array() > tol).count();
  result.infeasibility = (result.low_rank + result.sparse - observed).norm();
  const double scale = observed.norm();
  result.relative_infeasibility =
      scale > 0.0 ? result.infeasibility / scale : result.infeasibility;
}

}  // namespace lrsd
