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

// Dense matrix kernel shared by every solver: observation masks, thresholded
// partial SVD, the nuclear-norm and l1 proximal maps, and matrix norms.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

namespace lrsd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Throws InvalidArgument if any entry is NaN or infinite.
void RequireFinite(const Matrix& x, const char* what);

// Index set of observed entries. Entries are kept as a sorted, duplicate-free
// coordinate list together with a dense 0/1 indicator used for projections.
class ObservationMask {
 public:
  struct Entry {
    Index row;
    Index col;
    friend bool operator<(const Entry& a, const Entry& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    }
    friend bool operator==(const Entry& a, const Entry& b) = default;
  };

  static ObservationMask Full(Index rows, Index cols);
  // Sorts and deduplicates; throws on out-of-range or empty input.
  static ObservationMask FromEntries(Index rows, Index cols,
                                     std::vector<Entry> entries);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index size() const { return static_cast<Index>(entries_.size()); }
  bool is_full() const { return is_full_; }
  const std::vector<Entry>& entries() const { return entries_; }
  const Matrix& indicator() const { return indicator_; }
  bool contains(Index i, Index j) const { return indicator_(i, j) != 0.0; }

  // pi_Omega and its complement.
  Matrix Project(const Matrix& x) const;
  Matrix ProjectComplement(const Matrix& x) const;

  // Magnitudes |x_ij| over the observed entries, in entry order.
  Vector GatherAbs(const Matrix& x) const;

  friend bool operator==(const ObservationMask& a, const ObservationMask& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           a.entries_ == b.entries_;
  }

 private:
  ObservationMask(Index rows, Index cols, std::vector<Entry> entries);

  Index rows_ = 0;
  Index cols_ = 0;
  bool is_full_ = false;
  std::vector<Entry> entries_;
  Matrix indicator_;
};

// Leading singular triplets, sigma nonincreasing and strictly positive.
struct SvdFactors {
  Matrix left;   // m x k
  Vector values;  // k
  Matrix right;  // n x k

  Index count() const { return values.size(); }
  Matrix Reconstruct() const;
  // U Diag(f(sigma)) V^T for an elementwise map f.
  template <class F>
  Matrix Rebuild(F&& f) const {
    Vector mapped = values.unaryExpr(std::forward<F>(f));
    return left * mapped.asDiagonal() * right.transpose();
  }
};

// Running totals over a solver run: number of partial SVDs and the sum of
// singular values they returned (lsv).
struct SvdStats {
  std::int64_t svd_count = 0;
  std::int64_t lsv_count = 0;

  void Record(const SvdFactors& f) {
    ++svd_count;
    lsv_count += f.count();
  }
};

enum class SvdMethod { kAuto, kDense, kLanczos };

struct SvdOptions {
  SvdMethod method = SvdMethod::kAuto;
  // kAuto uses the dense path when min(m, n) is at most this.
  Index dense_cutoff = 512;
  // Relative residual tolerance for Lanczos Ritz pairs.
  double tolerance = 1e-10;
  Index initial_subspace = 10;
  // 0 means min(m, n).
  Index max_subspace = 0;
};

// Singular triplets of x with sigma > threshold, in nonincreasing order.
SvdFactors PartialSvd(const Matrix& x, double threshold,
                      const SvdOptions& options = {});

// argmin_L t*||L||_* + 0.5*||L - x||_F^2, i.e. U Diag((sigma - t)_+) V^T.
Matrix ShrinkSingular(const Matrix& x, double t, SvdStats* stats = nullptr);

// argmin_S t*||S||_1 + 0.5*||S - x||_F^2, entrywise soft thresholding with
// sgn(0) = 0.
Matrix ShrinkEntries(const Matrix& x, double t);

// Soft thresholding of a single value.
inline double SoftThreshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

inline double Sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

Matrix ProjectMask(const Matrix& x, const ObservationMask& mask);

struct Norms {
  double frobenius = 0.0;
  double spectral = 0.0;
  double nuclear = 0.0;
  double l1 = 0.0;
  double l1_masked = 0.0;
  double linf = 0.0;
};

// l1_masked is only meaningful when a mask is supplied; otherwise it equals l1.
Norms ComputeNorms(const Matrix& x, const ObservationMask* mask = nullptr);

double SpectralNorm(const Matrix& x);
double NuclearNorm(const Matrix& x);
double MaskedL1(const Matrix& x, const ObservationMask& mask);

}  // namespace lrsd
