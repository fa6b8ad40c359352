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

// Scalar search behind the noisy-constraint subproblem. For magnitudes a_i
// over the observed entries, weight xi and step rho,
//
//   phi(theta) = || min(xi/theta, a/(1 + rho theta)) ||_2
//
// is continuous and strictly decreasing on (0, inf) once some a_i > 0. An
// entry is "capped" (contributes xi/theta) when 1/theta <= a_i/xi - rho, so
// after sorting a ascending the capped set is always a suffix. With P_j the
// prefix sum of the j smallest a^2 and c = N - j capped entries,
//
//   phi(theta)^2 = P_j/(1 + rho theta)^2 + c (xi/theta)^2
//
// on the segment where exactly the first j entries are uncapped.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "lrsd/linalg.hpp"

namespace lrsd {

struct ThetaOptions {
  // Stop when |phi(theta) - delta| <= tol * max(1, delta).
  double tol = 1e-10;
  // Solve the segment equation with the closed-form quartic, polished by a
  // few Newton steps, instead of the bracketed iteration.
  bool use_quartic = false;
  int max_iters = 200;
};

class ThetaSearch {
 public:
  ThetaSearch(std::span<const double> magnitudes, double xi, double rho);

  Index size() const { return static_cast<Index>(sorted_.size()); }
  // Number of entries with a <= xi rho; these are never capped.
  Index never_capped() const { return never_capped_; }
  double norm() const;

  // phi via the prefix sums: O(log N).
  double Phi(double theta) const;
  // phi on the segment with j uncapped entries (valid on that segment only).
  double SegmentPhi(Index j, double theta) const;
  // Breakpoint theta_j = 1/(a_(j)/xi - rho) for j > never_capped (1-based j).
  double Breakpoint(Index j) const;

  // Unique theta > 0 with phi(theta) = delta, or 0 when ||a|| <= delta.
  double Solve(double delta, const ThetaOptions& options = {}) const;

  // Uncapped count j* of the segment containing the root.
  Index LocateSegment(double delta) const;

 private:
  double SolveSegment(Index j, double delta, double lo, double hi,
                      const ThetaOptions& options) const;
  double SolveSegmentQuartic(Index j, double delta, double lo, double hi,
                             const ThetaOptions& options) const;

  std::vector<double> sorted_;
  std::vector<double> prefix_sq_;  // prefix_sq_[j] = sum of first j a^2
  double xi_;
  double rho_;
  Index never_capped_ = 0;
};

// Convenience wrapper over ThetaSearch.
double FindTheta(std::span<const double> magnitudes, double xi, double rho,
                 double delta, const ThetaOptions& options = {});

// phi evaluated directly in O(N).
double PhiDirect(std::span<const double> magnitudes, double xi, double rho,
                 double theta);

// Real roots of c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0 (c4 != 0) by Ferrari's
// method. Roots may repeat.
std::vector<double> RealQuarticRoots(double c4, double c3, double c2,
                                     double c1, double c0);

}  // namespace lrsd
