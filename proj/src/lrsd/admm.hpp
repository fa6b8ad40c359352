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

// Augmented Lagrangian baselines for min ||L||_* + xi ||S||_1 s.t. L + S = D
// (full observation, no noise). The augmented Lagrangian is
//
//   ||L||_* + xi ||S||_1 - <Lambda, L + S - D> + 1/(2 rho) ||L + S - D||_F^2
//
// IADM does one L sweep and one S sweep per multiplier update; EADM repeats
// the sweeps until the pair stops moving before updating the multiplier.

#pragma once

#include <cstdint>
#include <optional>

#include "lrsd/problems.hpp"
#include "lrsd/result.hpp"

namespace lrsd {

enum class Rho0Reference {
  kSpectral,      // ||D||
  kSignSpectral,  // ||sgn(D)||
  kFrobenius,     // ||D||_F
};

struct AdmmConfig {
  // rho0 = rho0_factor * reference norm, unless rho0 is set explicitly.
  double rho0_factor = 0.8;
  Rho0Reference rho0_reference = Rho0Reference::kSpectral;
  std::optional<double> rho0;
  double eta = 2.0 / 3.0;
  double rel_infeas_tol = 1e-7;
  std::int64_t max_outer_iters = 500;
  // EADM inner loop: stop when max(||dL||_F, ||dS||_F) <= factor * ||D||_F.
  double inner_tol_factor = 1e-6;
  std::int64_t max_inner_iters = 100;
  // Defaults to rho0 * eta^60.
  std::optional<double> rho_floor;

  static AdmmConfig IadmDefaults();
  static AdmmConfig EadmDefaults();
};

void ValidateAdmmConfig(const AdmmConfig& cfg);

// Exact minimizer over L: shrink_singular(D + rho Lambda - S, rho).
Matrix ArgminLowRank(const Matrix& sparse, const Matrix& multiplier,
                     const Matrix& data, double rho, SvdStats* stats = nullptr);

// Exact minimizer over S: shrink_entries(D + rho Lambda - L, rho xi).
Matrix ArgminSparse(const Matrix& low_rank, const Matrix& multiplier,
                    const Matrix& data, double rho, double xi);

// Both require delta = 0 and a full mask. A run that hits the iteration cap
// still returns its last iterate with converged = false.
DecompositionResult SolveIadm(const Instance& instance, const AdmmConfig& cfg);
DecompositionResult SolveEadm(const Instance& instance, const AdmmConfig& cfg);

}  // namespace lrsd
