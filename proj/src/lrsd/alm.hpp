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

// Alternating linearization for the smoothed RPCP with missing data,
//
//   min f_mu(L) + g_nu(S)  s.t.  L + S = pi(D).
//
// Each iteration minimizes a linearization of one smoothed term plus a
// proximal term in closed form, then does the same for the other term. No
// multiplier is stored: the gradients of the smoothed terms play that role.

#pragma once

#include <cstdint>
#include <optional>

#include "lrsd/admm.hpp"
#include "lrsd/problems.hpp"
#include "lrsd/result.hpp"

namespace lrsd {

enum class SmoothingTie {
  kScaledNu,   // mu_k = rho_k, nu_k = nu_scale * rho_k
  kTiedToRho,  // mu_k = nu_k = rho_k
  kFixed,      // mu, nu held at fixed_mu / fixed_nu
};

struct AlmConfig {
  // rho0 = rho0_factor * reference; kAuto picks ||D|| for a full mask and
  // ||pi(D)||_F otherwise.
  double rho0_factor = 0.8;
  std::optional<Rho0Reference> rho0_reference;
  std::optional<double> rho0;
  double eta = 2.0 / 3.0;
  double rel_infeas_tol = 1e-7;
  std::int64_t max_iters = 500;
  std::optional<double> rho_floor;  // defaults to rho0 * eta^60

  // kScaledNu smooths the l1 term more finely than the nuclear norm; with
  // nu = rho the l1 smoothing dominates the final error.
  SmoothingTie smoothing_tie = SmoothingTie::kScaledNu;
  std::optional<double> nu_scale;  // defaults to xi
  double fixed_mu = 0.0;
  double fixed_nu = 0.0;

  // Threshold of the partial SVD in the L-update is mu_k; 0 gives the exact
  // update.
  bool exact_svd = false;
  // Check both update optimality conditions at every iterate (exact SVD
  // recomputation) and track the smoothed objective at the feasible pair.
  bool verify = false;
  double monotonicity_slack = 1e-10;
};

void ValidateAlmConfig(const AlmConfig& cfg);

// L-update. Returns U Diag(sigma*) V^T from the SVD of
// M = rho Z_nu(S) - S + pi(D) thresholded at `threshold` (mu when unset).
// `factors`, when given, receives the factorization of the result.
Matrix AlmUpdateL(const Matrix& sparse, const Matrix& observed, double rho,
                  double mu, double nu, double xi, const ObservationMask& mask,
                  std::optional<double> threshold = std::nullopt,
                  SvdStats* stats = nullptr, SvdFactors* factors = nullptr);

// S-update from B = rho W_mu(L) - L + pi(D).
Matrix AlmUpdateS(const Matrix& low_rank, const Matrix& observed, double rho,
                  double mu, double nu, double xi, const ObservationMask& mask,
                  const SvdFactors* factors_of_low_rank = nullptr);

// Max-abs residual of the L-update optimality condition
//   W_mu(L) + (L + S - pi(D))/rho - Z_nu(S) = 0.
double AlmLResidual(const Matrix& low_rank, const Matrix& sparse,
                    const Matrix& observed, double rho, double mu, double nu,
                    double xi, const ObservationMask& mask);

// Max-abs residual of the S-update optimality condition
//   -W_mu(L) + (L + S - pi(D))/rho + Z_nu(S) = 0.
double AlmSResidual(const Matrix& low_rank, const Matrix& sparse,
                    const Matrix& observed, double rho, double mu, double nu,
                    double xi, const ObservationMask& mask);

// f_mu(pi(D) - S) + g_nu(S).
double FeasiblePairObjective(const Matrix& sparse, const Matrix& observed,
                             double mu, double nu, double xi,
                             const ObservationMask& mask);

// Requires delta = 0.
DecompositionResult SolveAlm(const Instance& instance, const AlmConfig& cfg);

}  // namespace lrsd
