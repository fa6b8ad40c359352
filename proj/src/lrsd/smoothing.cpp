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

#include "lrsd/smoothing.hpp"

#include <algorithm>
#include <cmath>

#include "lrsd/error.hpp"

namespace lrsd {

namespace {

void RequirePositive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(name) + " must be positive");
  }
}

}  // namespace

double HuberNuclear(double s, double mu) {
  return s <= mu ? s * s / (2.0 * mu) : s - 0.5 * mu;
}

double HuberL1(double s, double nu, double xi) {
  const double a = std::abs(s);
  return a <= nu * xi ? s * s / (2.0 * nu) : xi * a - 0.5 * nu * xi * xi;
}

double FMuValue(const Matrix& l, double mu) {
  RequirePositive(mu, "mu");
  if (l.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(l);
  double total = 0.0;
  for (Index i = 0; i < svd.singularValues().size(); ++i) {
    total += HuberNuclear(svd.singularValues()(i), mu);
  }
  return total;
}

double GNuValue(const Matrix& s, double nu, double xi,
                const ObservationMask& mask) {
  RequirePositive(nu, "nu");
  RequirePositive(xi, "xi");
  if (s.rows() != mask.rows() || s.cols() != mask.cols()) {
    throw DimensionMismatch("g_nu: shape mismatch");
  }
  double total = 0.0;
  for (const auto& e : mask.entries()) total += HuberL1(s(e.row, e.col), nu, xi);
  return total;
}

Matrix GradFMu(const SvdFactors& f, double mu) {
  RequirePositive(mu, "mu");
  return f.Rebuild([mu](double s) { return std::min(s / mu, 1.0); });
}

Matrix GradFMu(const Matrix& l, double mu) {
  RequirePositive(mu, "mu");
  // U min(S/mu, 1) V^T = (L - shrink(L, mu)) / mu, which only needs the
  // triplets above mu.
  return (l - ShrinkSingular(l, mu)) / mu;
}

Matrix GradGNu(const Matrix& s, double nu, double xi,
               const ObservationMask& mask) {
  RequirePositive(nu, "nu");
  RequirePositive(xi, "xi");
  Matrix z = s.unaryExpr([nu, xi](double v) {
    return Sign(v) * std::min(std::abs(v) / nu, xi);
  });
  return mask.Project(z);
}

SmoothingParams EpsToParams(double epsilon, Index rows, Index cols,
                            bool both_smoothed) {
  RequirePositive(epsilon, "epsilon");
  if (rows <= 0 || cols <= 0) throw InvalidArgument("dimensions must be positive");
  SmoothingParams p;
  p.tau = Tau(rows, cols);
  p.xi = DefaultXi(rows, cols);
  if (both_smoothed) {
    p.mu = epsilon / (4.0 * p.tau);
    p.nu = p.mu;
  } else {
    p.mu = epsilon / (2.0 * p.tau);
  }
  return p;
}

}  // namespace lrsd
