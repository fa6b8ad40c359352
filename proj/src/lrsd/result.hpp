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

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lrsd/linalg.hpp"

namespace lrsd {

// One row of a solver's iteration log.
struct IterationLog {
  double rho = 0.0;          // penalty / smoothing parameter in effect
  double infeasibility = 0.0;  // ||L + S - pi(D)||_F / ||pi(D)||_F
  double change = 0.0;       // successive change (PSPG stopping quantity)
  Index rank = 0;            // singular values kept by this iteration's SVD
};

struct DecompositionResult {
  std::string solver;
  Matrix low_rank;
  Matrix sparse;
  // Final Lagrange multiplier; only the ADMM solvers keep one.
  std::optional<Matrix> multiplier;

  std::int64_t iterations = 0;
  SvdStats svd;
  bool converged = false;

  // ||L||_* + xi ||pi(S)||_1 at the returned point.
  double objective = 0.0;
  // ||L + S - pi(D)||_F and its ratio to ||pi(D)||_F.
  double infeasibility = 0.0;
  double relative_infeasibility = 0.0;
  Index rank = 0;
  double wall_seconds = 0.0;

  // Verification mode only: largest subproblem residual seen over the run.
  double max_subproblem_residual = std::numeric_limits<double>::quiet_NaN();
  // ALM: number of continuation segments on which the feasible-pair smoothed
  // objective rose by more than the slack.
  std::int64_t monotonicity_warnings = 0;

  std::vector<IterationLog> trace;
};

}  // namespace lrsd
