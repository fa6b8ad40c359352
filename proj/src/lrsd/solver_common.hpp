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

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>

#include "lrsd/problems.hpp"
#include "lrsd/result.hpp"

namespace lrsd {

// Geometric continuation rho_k = max(rho0 * eta^k, floor).
inline double ContinuationValue(double rho0, double eta, std::int64_t k,
                                double floor) {
  return std::max(rho0 * std::pow(eta, static_cast<double>(k)), floor);
}

// ||L||_* + xi ||pi(S)||_1.
double RpcaObjective(const Matrix& low_rank, const Matrix& sparse, double xi,
                     const ObservationMask& mask);

// Fills objective, infeasibility and rank of a finished run.
void FinalizeResult(const Instance& instance, DecompositionResult& result);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace lrsd
