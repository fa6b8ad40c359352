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

// Reference implementations used only by the tests. Each one solves the same
// problem as a library routine by a different, slower route.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace lrsd::oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

Mat RandomMatrix(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols,
                 double scale = 1.0);

// Mask indicator with each entry kept with probability keep (at least one).
Mat RandomIndicator(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols,
                    double keep);

// Singular values from the one-sided Jacobi SVD.
Vec JacobiSingularValues(const Mat& x);
// Singular value thresholding through the Jacobi SVD.
Mat JacobiShrink(const Mat& x, double t);

// Central difference gradient of f at x.
template <class F>
Mat FiniteDifferenceGradient(F&& f, const Mat& x, double h) {
  Mat g(x.rows(), x.cols());
  Mat p = x;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double v = p(i, j);
      p(i, j) = v + h;
      const double up = f(p);
      p(i, j) = v - h;
      const double down = f(p);
      p(i, j) = v;
      g(i, j) = (up - down) / (2.0 * h);
    }
  }
  return g;
}

// phi(theta) = ||min(xi/theta, a/(1 + rho theta))||_2, entry by entry.
double NaivePhi(const std::vector<double>& a, double xi, double rho,
                double theta);

// Root of NaivePhi = delta by plain bisection in log(theta) over
// [1e-12, 1e12]; 0 when ||a|| <= delta.
double BisectTheta(const std::vector<double>& a, double xi, double rho,
                   double delta);

// The noisy-constraint subproblem
//   min ||L - q||^2/(2 rho) + xi ||pi(S)||_1 s.t. ||L + S - pi(D)||_F <= delta
// reduced to S on the mask: L is the projection of q onto the ball around
// pi(D) - S, giving h(S) = xi ||S||_1 + (||S - R||_F - delta)_+^2 / (2 rho)
// with R = pi(D - q). Minimized by FISTA with restarts.
struct SubproblemOracle {
  double objective = 0.0;
  Mat sparse;  // on the mask
};
SubproblemOracle SolveSubproblemByFista(const Mat& q, const Mat& data,
                                        const Mat& indicator, double xi,
                                        double rho, double delta,
                                        int iterations = 20000);

// Projected subgradient on the same problem in the full (L, S) variables:
// diminishing steps, exact projection onto the constraint set (the excess of
// L + S is split evenly between the two). Best feasible objective seen.
double SubproblemProjectedSubgradient(const Mat& q, const Mat& data,
                                      const Mat& indicator, double xi,
                                      double rho, double delta, int steps);

// Objective of a candidate pair for the problem above.
double SubproblemObjective(const Mat& low_rank, const Mat& sparse,
                           const Mat& q, const Mat& indicator, double xi,
                           double rho);

// Optimal value of min ||S||_1 s.t. ||S - R||_F <= delta from its scalar dual
//   max_{lam >= 0} ||shrink(R, 1/lam)||_1 + lam/2 (||min(|R|, 1/lam)||^2 - delta^2)
// maximized by golden-section search in log(lam).
double PostprocessDualValue(const Mat& residual, double delta);

// Projected subgradient on the same problem; best objective after `steps`.
double PostprocessProjectedSubgradient(const Mat& residual, double delta,
                                       int steps);

}  // namespace lrsd::oracle
