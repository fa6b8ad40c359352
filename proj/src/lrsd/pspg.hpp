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

// Accelerated proximal gradient on the partially smoothed stable decomposition
//
//   min f_mu(L) + xi ||pi(S)||_1  s.t.  ||L + S - pi(D)||_F <= delta.
//
// Only the nuclear norm is smoothed, so every step is a prox-linear step in L
// paired with an exact minimization in S over the constraint set. That joint
// step has a closed form up to one scalar, found by ThetaSearch.

#pragma once

#include <cstdint>
#include <optional>

#include "lrsd/problems.hpp"
#include "lrsd/result.hpp"
#include "lrsd/theta.hpp"

namespace lrsd {

struct PspgConfig {
  double mu0_factor = 0.8;  // mu0 = factor * ||pi(D)||
  std::optional<double> mu0;
  double eta = 2.0 / 3.0;
  std::int64_t k_bar = 30;  // mu shrinks for k <= k_bar, then stays put
  double stop_factor = 0.05;
  // Successive-change tolerance when the noise level is unknown or zero.
  double fallback_tol = 1e-7;
  std::int64_t max_iters = 1000;
  // Run exactly this many iterations, ignoring the stopping rule.
  std::optional<std::int64_t> fixed_iterations;
  double theta_tol = 1e-10;
  bool use_quartic = false;
  double delta_zero_cutoff = 1e-15;
  // Check the subproblem optimality conditions at every iterate.
  bool verify = false;
};

void ValidatePspgConfig(const PspgConfig& cfg);

enum class SubproblemCase { kInterior, kBoundary, kDeltaZero };
const char* SubproblemCaseName(SubproblemCase c);

struct SubproblemSolution {
  Matrix low_rank;
  Matrix sparse;
  double theta = 0.0;
  SubproblemCase case_tag = SubproblemCase::kInterior;
};

// q(Y) = U Diag((sigma - mu)_+) V^T, i.e. Y - mu W_mu(Y) without forming W.
Matrix ComputeQ(const Matrix& y, double mu, SvdStats* stats = nullptr);

struct SubproblemOptions {
  ThetaOptions theta;
  double delta_zero_cutoff = 1e-15;
};

// argmin ||L - q||_F^2/(2 rho) + xi ||pi(S)||_1
//   s.t. ||L + S - pi(D)||_F <= delta, where pi_c(L + S) = 0 is implied.
SubproblemSolution SolveSubproblem(const Matrix& q, const Matrix& data,
                                   const ObservationMask& mask, double xi,
                                   double rho, double delta,
                                   const SubproblemOptions& options = {});

// Residuals of the five optimality conditions with multiplier theta:
//   (i)   (L - q)/rho + theta r = 0           r = pi(L + S - D)
//   (ii)  xi G + theta r = 0, G in d||pi(S)||_1, with pi_c(L + S) = 0
//   (iii) ||r||_F <= delta
//   (iv)  theta >= 0
//   (v)   theta (||r||_F - delta) = 0
// For the delta = 0 case the multiplier is free and (i)-(ii) collapse to
// (L - q)/rho in xi d||pi(S)||_1.
struct KktResiduals {
  double stationarity_l = 0.0;
  double stationarity_s = 0.0;
  double feasibility = 0.0;
  double dual_sign = 0.0;
  double complementarity = 0.0;
  double Max() const;
};

KktResiduals CheckSubproblemKkt(const Matrix& q, const Matrix& data,
                                const ObservationMask& mask, double xi,
                                double rho, double delta,
                                const SubproblemSolution& sol,
                                double delta_zero_cutoff = 1e-15);

DecompositionResult SolvePspg(const Instance& instance, const PspgConfig& cfg);

}  // namespace lrsd
