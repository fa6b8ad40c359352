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

#include "lrsd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "lrsd/error.hpp"

namespace lrsd {

void RequireFinite(const Matrix& x, const char* what) {
  if (!x.allFinite()) {
    throw InvalidArgument(std::string(what) + ": matrix has non-finite entries");
  }
}

ObservationMask::ObservationMask(Index rows, Index cols,
                                 std::vector<Entry> entries)
    : rows_(rows),
      cols_(cols),
      is_full_(static_cast<Index>(entries.size()) == rows * cols),
      entries_(std::move(entries)),
      indicator_(Matrix::Zero(rows, cols)) {
  for (const Entry& e : entries_) indicator_(e.row, e.col) = 1.0;
}

ObservationMask ObservationMask::Full(Index rows, Index cols) {
  if (rows <= 0 || cols <= 0) {
    throw InvalidArgument("mask dimensions must be positive");
  }
  std::vector<Entry> entries;
  entries.reserve(static_cast<size_t>(rows * cols));
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) entries.push_back({i, j});
  return ObservationMask(rows, cols, std::move(entries));
}

ObservationMask ObservationMask::FromEntries(Index rows, Index cols,
                                             std::vector<Entry> entries) {
  if (rows <= 0 || cols <= 0) {
    throw InvalidArgument("mask dimensions must be positive");
  }
  for (const Entry& e : entries) {
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols) {
      throw InvalidArgument("mask index (" + std::to_string(e.row) + "," +
                            std::to_string(e.col) + ") out of range");
    }
  }
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  if (entries.empty()) throw InvalidArgument("mask must contain an entry");
  return ObservationMask(rows, cols, std::move(entries));
}

Matrix ObservationMask::Project(const Matrix& x) const {
  if (x.rows() != rows_ || x.cols() != cols_) {
    throw DimensionMismatch("mask projection: shape mismatch");
  }
  if (is_full_) return x;
  return x.cwiseProduct(indicator_);
}

Matrix ObservationMask::ProjectComplement(const Matrix& x) const {
  if (x.rows() != rows_ || x.cols() != cols_) {
    throw DimensionMismatch("mask projection: shape mismatch");
  }
  if (is_full_) return Matrix::Zero(rows_, cols_);
  return x - x.cwiseProduct(indicator_);
}

Vector ObservationMask::GatherAbs(const Matrix& x) const {
  Vector out(size());
  for (Index k = 0; k < size(); ++k) {
    out(k) = std::abs(x(entries_[k].row, entries_[k].col));
  }
  return out;
}

Matrix SvdFactors::Reconstruct() const {
  return left * values.asDiagonal() * right.transpose();
}

namespace {

SvdFactors Truncate(const Matrix& u, const Vector& s, const Matrix& v,
                    double threshold) {
  Index k = 0;
  while (k < s.size() && s(k) > threshold && s(k) > 0.0) ++k;
  return SvdFactors{u.leftCols(k), s.head(k), v.leftCols(k)};
}

// Eigen's divide-and-conquer SVD occasionally returns singular vectors that
// are off by far more than roundoff when small singular values cluster. Every
// result is checked against X V = U S and recomputed by one-sided Jacobi if
// the residual is not at roundoff level.
void ThinSvd(const Matrix& x, Matrix* u, Vector* s, Matrix* v) {
  Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() == Eigen::Success) {
    *u = svd.matrixU();
    *s = svd.singularValues();
    *v = svd.matrixV();
    const double top = s->size() ? (*s)(0) : 0.0;
    const double residual =
        (x * (*v) - (*u) * s->asDiagonal()).norm();
    if (std::isfinite(residual) &&
        residual <= 1e-11 * std::max(top, 1e-300) *
                        std::sqrt(static_cast<double>(s->size()) + 1.0)) {
      return;
    }
  }
  Eigen::JacobiSVD<Matrix> jacobi(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (jacobi.info() != Eigen::Success) {
    throw SvdNonConvergence("dense SVD failed to converge");
  }
  *u = jacobi.matrixU();
  *s = jacobi.singularValues();
  *v = jacobi.matrixV();
}

SvdFactors DenseSvd(const Matrix& x, double threshold) {
  Matrix u, v;
  Vector s;
  ThinSvd(x, &u, &s, &v);
  return Truncate(u, s, v, threshold);
}

// Golub-Kahan-Lanczos bidiagonalization with full reorthogonalization. The
// Krylov basis is extended in place and the subspace size doubles until every
// Ritz value above the threshold has converged and at least one converged
// value has dropped to the threshold (or the basis spans the whole space).
class LanczosBidiag {
 public:
  LanczosBidiag(const Matrix& a, Index capacity)
      : a_(a),
        u_(a.rows(), capacity),
        v_(a.cols(), capacity + 1),
        alpha_(capacity),
        beta_(capacity),
        rng_(0x5eed5eedULL) {
    Vector v0 = Vector::Ones(a.cols());
    for (Index i = 0; i < v0.size(); ++i) v0(i) += 0.1 * UnitNoise();
    v_.col(0) = v0.normalized();
  }

  Index steps() const { return steps_; }

  void ExtendTo(Index k) {
    const double scale = std::max(1.0, a_.norm());
    const double tiny = 1e-14 * scale;
    for (Index j = steps_; j < k; ++j) {
      Vector u = a_ * v_.col(j);
      if (j > 0) u -= beta_(j - 1) * u_.col(j - 1);
      Reorthogonalize(u, u_, j);
      double alpha = u.norm();
      if (alpha <= tiny) {
        u = FreshDirection(u_, j, a_.rows());
        alpha = 0.0;
      } else {
        u /= alpha;
      }
      u_.col(j) = u;
      alpha_(j) = alpha;

      Vector v = a_.transpose() * u_.col(j) - alpha * v_.col(j);
      Reorthogonalize(v, v_, j + 1);
      double beta = v.norm();
      if (beta <= tiny) {
        beta = 0.0;
        if (j + 1 < a_.cols()) v = FreshDirection(v_, j + 1, a_.cols());
      } else {
        v /= beta;
      }
      if (j + 1 < v_.cols()) v_.col(j + 1) = v;
      beta_(j) = beta;
    }
    steps_ = k;
  }

  // Ritz triplets of the current bidiagonal plus the residual bound
  // beta_k * |last component of each left singular vector of B|.
  void Ritz(Matrix* left, Vector* values, Matrix* right,
            Vector* residual) const {
    const Index k = steps_;
    Matrix b = Matrix::Zero(k, k);
    for (Index j = 0; j < k; ++j) {
      b(j, j) = alpha_(j);
      if (j + 1 < k) b(j, j + 1) = beta_(j);
    }
    Matrix bu, bv;
    ThinSvd(b, &bu, values, &bv);
    *left = u_.leftCols(k) * bu;
    *right = v_.leftCols(k) * bv;
    *residual = (beta_(k - 1) * bu.row(k - 1).transpose()).cwiseAbs();
  }

 private:
  double UnitNoise() {
    return std::uniform_real_distribution<double>(-1.0, 1.0)(rng_);
  }

  static void Reorthogonalize(Vector& w, const Matrix& basis, Index count) {
    if (count == 0) return;
    // Two passes of classical Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
      w -= basis.leftCols(count) * (basis.leftCols(count).transpose() * w);
    }
  }

  Vector FreshDirection(const Matrix& basis, Index count, Index dim) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      Vector w(dim);
      for (Index i = 0; i < dim; ++i) w(i) = UnitNoise();
      Reorthogonalize(w, basis, count);
      const double n = w.norm();
      if (n > 1e-8) return w / n;
    }
    throw SvdNonConvergence("Lanczos restart could not find a new direction");
  }

  const Matrix& a_;
  Matrix u_;
  Matrix v_;
  Vector alpha_;
  Vector beta_;
  Index steps_ = 0;
  std::mt19937_64 rng_;
};

SvdFactors LanczosSvd(const Matrix& x, double threshold,
                      const SvdOptions& options) {
  const Index full = std::min(x.rows(), x.cols());
  const Index budget =
      options.max_subspace > 0 ? std::min(options.max_subspace, full) : full;
  if (x.isZero(0.0)) {
    return SvdFactors{Matrix(x.rows(), 0), Vector(0), Matrix(x.cols(), 0)};
  }
  LanczosBidiag lanczos(x, budget);
  Index k = std::clamp<Index>(options.initial_subspace, 1, budget);
  Matrix left, right;
  Vector values, residual;
  while (true) {
    lanczos.ExtendTo(k);
    lanczos.Ritz(&left, &values, &right, &residual);
    if (k == full) {
      // The bidiagonalization spans the whole space; Ritz pairs are exact.
      return Truncate(left, values, right, threshold);
    }
    const double tol = options.tolerance * std::max(values(0), 1e-300);
    Index converged = 0;
    while (converged < k && residual(converged) <= tol) ++converged;
    if (converged > 0 && values(converged - 1) <= threshold) {
      return Truncate(left.leftCols(converged), values.head(converged),
                      right.leftCols(converged), threshold);
    }
    if (k >= budget) {
      throw SvdNonConvergence("Lanczos SVD did not converge within a subspace of " +
                              std::to_string(budget));
    }
    k = std::min(2 * k, budget);
  }
}

}  // namespace

SvdFactors PartialSvd(const Matrix& x, double threshold,
                      const SvdOptions& options) {
  if (!(threshold >= 0.0)) {
    throw InvalidArgument("SVD threshold must be nonnegative");
  }
  RequireFinite(x, "partial SVD");
  const Index small = std::min(x.rows(), x.cols());
  bool dense = options.method == SvdMethod::kDense ||
               (options.method == SvdMethod::kAuto &&
                small <= options.dense_cutoff);
  return dense ? DenseSvd(x, threshold) : LanczosSvd(x, threshold, options);
}

Matrix ShrinkSingular(const Matrix& x, double t, SvdStats* stats) {
  if (!(t >= 0.0)) throw InvalidArgument("shrinkage level must be nonnegative");
  if (t == 0.0) return x;
  SvdFactors f = PartialSvd(x, t);
  if (stats) stats->Record(f);
  return f.Rebuild([t](double s) { return s - t; });
}

Matrix ShrinkEntries(const Matrix& x, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("shrinkage level must be nonnegative");
  return x.unaryExpr([t](double v) { return SoftThreshold(v, t); });
}

Matrix ProjectMask(const Matrix& x, const ObservationMask& mask) {
  return mask.Project(x);
}

double SpectralNorm(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(x);
  return svd.singularValues()(0);
}

double NuclearNorm(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(x);
  return svd.singularValues().sum();
}

double MaskedL1(const Matrix& x, const ObservationMask& mask) {
  if (x.rows() != mask.rows() || x.cols() != mask.cols()) {
    throw DimensionMismatch("masked l1: shape mismatch");
  }
  if (mask.is_full()) return x.cwiseAbs().sum();
  return x.cwiseAbs().cwiseProduct(mask.indicator()).sum();
}

Norms ComputeNorms(const Matrix& x, const ObservationMask* mask) {
  Norms n;
  if (x.size() == 0) return n;
  Eigen::BDCSVD<Matrix> svd(x);
  n.frobenius = x.norm();
  n.spectral = svd.singularValues()(0);
  n.nuclear = svd.singularValues().sum();
  n.l1 = x.cwiseAbs().sum();
  n.l1_masked = mask ? MaskedL1(x, *mask) : n.l1;
  n.linf = x.cwiseAbs().maxCoeff();
  return n;
}

}  // namespace lrsd
