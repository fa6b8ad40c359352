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

// Smoothed nuclear norm f_mu and smoothed masked l1 norm g_nu.
//
//   f_mu(L) = max_{||W|| <= 1}      <L, W> - mu/2 ||W||_F^2
//   g_nu(S) = max_{||Z||_inf <= xi} <pi(S), Z> - nu/2 ||Z||_F^2
//
// Both maxima separate (per singular value, per entry) into a Huber function,
// which is what the value routines evaluate. The gradients are the maximizers
// W_mu(L) and Z_nu(S), Lipschitz with constants 1/mu and 1/nu.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "lrsd/linalg.hpp"

namespace lrsd {

struct SmoothingParams {
  double mu = 0.0;
  std::optional<double> nu;  // unset for partial smoothing
  double xi = 0.0;
  double tau = 0.0;          // min(m, n) / 2
};

// Huber evaluation of the per-singular-value maximization: s^2/(2mu) for
// s <= mu, s - mu/2 above.
double HuberNuclear(double s, double mu);
// Per-entry maximization of s*z - nu/2 z^2 over |z| <= xi.
double HuberL1(double s, double nu, double xi);

double FMuValue(const Matrix& l, double mu);
double GNuValue(const Matrix& s, double nu, double xi,
                const ObservationMask& mask);

// W_mu(L) = U Diag(min(sigma/mu, 1)) V^T.
Matrix GradFMu(const Matrix& l, double mu);
// W_mu rebuilt from an existing factorization of L.
Matrix GradFMu(const SvdFactors& factors_of_l, double mu);

// Z_nu(S): sgn(S_ij) min(|S_ij|/nu, xi) on the mask, zero elsewhere.
Matrix GradGNu(const Matrix& s, double nu, double xi,
               const ObservationMask& mask);

// Smoothing level giving an eps-optimal point from an eps/2-optimal point of
// the smoothed problem: mu = nu = eps/(4 tau) when both terms are smoothed,
// mu = eps/(2 tau) when only the nuclear norm is.
SmoothingParams EpsToParams(double epsilon, Index rows, Index cols,
                            bool both_smoothed);

inline double DefaultXi(Index rows, Index cols) {
  return 1.0 / std::sqrt(static_cast<double>(std::max(rows, cols)));
}

inline double Tau(Index rows, Index cols) {
  return 0.5 * static_cast<double>(std::min(rows, cols));
}

}  // namespace lrsd
