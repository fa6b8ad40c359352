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

#include "lrsd/theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lrsd/error.hpp"

namespace lrsd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Real roots of x^3 + a x^2 + b x + c.
std::vector<double> RealCubicRoots(double a, double b, double c) {
  const double q = (a * a - 3.0 * b) / 9.0;
  const double r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
  const double shift = a / 3.0;
  if (r * r < q * q * q) {
    const double t = std::acos(std::clamp(r / std::sqrt(q * q * q), -1.0, 1.0));
    const double s = -2.0 * std::sqrt(q);
    return {s * std::cos(t / 3.0) - shift,
            s * std::cos((t + 2.0 * M_PI) / 3.0) - shift,
            s * std::cos((t - 2.0 * M_PI) / 3.0) - shift};
  }
  const double big = -std::copysign(
      std::cbrt(std::abs(r) + std::sqrt(r * r - q * q * q)), r);
  const double small = big != 0.0 ? q / big : 0.0;
  return {big + small - shift};
}

void QuadraticRoots(double b, double c, std::vector<double>& out) {
  // x^2 + b x + c
  const double disc = b * b - 4.0 * c;
  if (disc < 0.0) return;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  if (q != 0.0) {
    out.push_back(q);
    out.push_back(c / q);
  } else {
    out.push_back(0.0);
    out.push_back(0.0);
  }
}

}  // namespace

std::vector<double> RealQuarticRoots(double c4, double c3, double c2,
                                     double c1, double c0) {
  if (c4 == 0.0) throw InvalidArgument("leading quartic coefficient is zero");
  const double b = c3 / c4, c = c2 / c4, d = c1 / c4, e = c0 / c4;
  const double p = c - 3.0 * b * b / 8.0;
  const double q = d - b * c / 2.0 + b * b * b / 8.0;
  const double r = e - b * d / 4.0 + b * b * c / 16.0 -
                   3.0 * b * b * b * b / 256.0;
  std::vector<double> ys;
  const double scale = 1.0 + std::abs(p) + std::abs(r);
  if (std::abs(q) <= 1e-14 * scale) {
    std::vector<double> zs;
    QuadraticRoots(p, r, zs);
    for (double z : zs) {
      if (z >= 0.0) {
        ys.push_back(std::sqrt(z));
        ys.push_back(-std::sqrt(z));
      }
    }
  } else {
    // 8m^3 + 8p m^2 + (2p^2 - 8r) m - q^2 = 0 has a positive root.
    const auto ms = RealCubicRoots(p, (p * p - 4.0 * r) / 4.0, -q * q / 8.0);
    const double m = *std::max_element(ms.begin(), ms.end());
    if (m > 0.0) {
      const double s = std::sqrt(2.0 * m);
      const double t = q / (2.0 * s);
      QuadraticRoots(-s, p / 2.0 + m + t, ys);
      QuadraticRoots(s, p / 2.0 + m - t, ys);
    }
  }
  for (double& y : ys) y -= b / 4.0;
  return ys;
}

ThetaSearch::ThetaSearch(std::span<const double> magnitudes, double xi,
                         double rho)
    : sorted_(magnitudes.begin(), magnitudes.end()), xi_(xi), rho_(rho) {
  if (!(xi > 0.0) || !(rho > 0.0))
    throw InvalidArgument("theta search needs positive xi and rho");
  for (double& a : sorted_) {
    if (!std::isfinite(a)) throw InvalidArgument("non-finite magnitude");
    a = std::abs(a);
  }
  std::sort(sorted_.begin(), sorted_.end());
  prefix_sq_.assign(sorted_.size() + 1, 0.0);
  for (std::size_t i = 0; i < sorted_.size(); ++i)
    prefix_sq_[i + 1] = prefix_sq_[i] + sorted_[i] * sorted_[i];
  never_capped_ = std::upper_bound(sorted_.begin(), sorted_.end(), xi * rho) -
                  sorted_.begin();
}

double ThetaSearch::norm() const { return std::sqrt(prefix_sq_.back()); }

double ThetaSearch::SegmentPhi(Index j, double theta) const {
  const double uncapped = prefix_sq_[j] / ((1.0 + rho_ * theta) *
                                           (1.0 + rho_ * theta));
  const double capped = static_cast<double>(size() - j) * (xi_ / theta) *
                        (xi_ / theta);
  return std::sqrt(uncapped + capped);
}

double ThetaSearch::Phi(double theta) const {
  if (!(theta > 0.0)) return kInf;
  if (std::isinf(theta)) return 0.0;
  const double cut = xi_ * (rho_ + 1.0 / theta);
  const Index j =
      std::upper_bound(sorted_.begin(), sorted_.end(), cut) - sorted_.begin();
  return SegmentPhi(j, theta);
}

double ThetaSearch::Breakpoint(Index j) const {
  return 1.0 / (sorted_[j - 1] / xi_ - rho_);
}

Index ThetaSearch::LocateSegment(double delta) const {
  // phi(theta_j) is nondecreasing in j; find the last j with phi <= delta.
  Index lo = never_capped_;  // phi(theta_{never_capped}) = phi(inf) = 0
  Index hi = size() + 1;     // first index known to fail
  while (hi - lo > 1) {
    const Index mid = lo + (hi - lo) / 2;
    if (SegmentPhi(mid, Breakpoint(mid)) <= delta)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double ThetaSearch::Solve(double delta, const ThetaOptions& options) const {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw InvalidArgument("theta search needs a positive delta");
  if (!(options.tol > 0.0)) throw InvalidConfig("theta tolerance must be positive");
  if (norm() <= delta) return 0.0;

  const Index j = LocateSegment(delta);
  const double lo = j < size() ? Breakpoint(j + 1) : 0.0;
  const double hi = j > never_capped_ ? Breakpoint(j) : kInf;
  if (!(lo <= hi) || (j > never_capped_ && SegmentPhi(j, hi) > delta) ||
      (j < size() && SegmentPhi(j, lo) < delta)) {
    std::ostringstream msg;
    msg << "theta search: segment " << j << " does not bracket delta "
        << delta << " (lo " << lo << ", hi " << hi << ")";
    throw ThetaSearchFailure(msg.str());
  }

  const double p = prefix_sq_[j];
  const double c = static_cast<double>(size() - j);
  if (c == 0.0) return (std::sqrt(p) / delta - 1.0) / rho_;
  if (p == 0.0) return xi_ * std::sqrt(c) / delta;
  if (options.use_quartic) return SolveSegmentQuartic(j, delta, lo, hi, options);
  return SolveSegment(j, delta, lo, hi, options);
}

double ThetaSearch::SolveSegment(Index j, double delta, double lo, double hi,
                                 const ThetaOptions& options) const {
  const double p = prefix_sq_[j];
  const double c = static_cast<double>(size() - j);
  const double cx2 = c * xi_ * xi_;
  // Bounds from dropping either term of phi^2.
  lo = std::max({lo, xi_ * std::sqrt(c) / delta,
                 (std::sqrt(p) / delta - 1.0) / rho_});
  hi = std::min(hi, std::sqrt(p / (rho_ * rho_) + cx2) / delta);
  if (lo > hi) lo = hi;

  // h(theta) = phi^2 - delta^2 is convex and decreasing, so Newton from the
  // left end stays left of the root; bisection guards the rest.
  auto h = [&](double t) {
    const double u = 1.0 + rho_ * t;
    return p / (u * u) + cx2 / (t * t) - delta * delta;
  };
  auto dh = [&](double t) {
    const double u = 1.0 + rho_ * t;
    return -2.0 * rho_ * p / (u * u * u) - 2.0 * cx2 / (t * t * t);
  };
  const double target = options.tol * delta;
  double theta = lo;
  for (int it = 0; it < options.max_iters; ++it) {
    const double hv = h(theta);
    const double phi = std::sqrt(std::max(hv + delta * delta, 0.0));
    if (std::abs(phi - delta) <= target) return theta;
    if (hv > 0.0)
      lo = theta;
    else
      hi = theta;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi)
      return hi;  // phi(hi) <= delta keeps the iterate feasible
    double next = theta - hv / dh(theta);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    theta = next;
  }
  std::ostringstream msg;
  msg << "theta search did not converge on segment " << j << " (lo " << lo
      << ", hi " << hi << ", delta " << delta << ")";
  throw ThetaSearchFailure(msg.str());
}

double ThetaSearch::SolveSegmentQuartic(Index j, double delta, double lo,
                                        double hi,
                                        const ThetaOptions& options) const {
  const double p = prefix_sq_[j];
  const double c = static_cast<double>(size() - j);
  const double cx2 = c * xi_ * xi_;
  const double d2 = delta * delta;
  const auto roots = RealQuarticRoots(
      d2 * rho_ * rho_, 2.0 * d2 * rho_, d2 - p - cx2 * rho_ * rho_,
      -2.0 * cx2 * rho_, -cx2);
  const double hi_eff = std::isinf(hi) ? kInf : hi * (1.0 + 1e-8);
  double best = -1.0;
  for (double r : roots) {
    if (r > 0.0 && r >= lo * (1.0 - 1e-8) && r <= hi_eff) {
      if (best < 0.0 || std::abs(SegmentPhi(j, r) - delta) <
                            std::abs(SegmentPhi(j, best) - delta))
        best = r;
    }
  }
  if (best > 0.0) {
    // Polish: a couple of Newton steps on phi^2 - delta^2.
    for (int it = 0; it < 3; ++it) {
      const double u = 1.0 + rho_ * best;
      const double hv = p / (u * u) + cx2 / (best * best) - d2;
      const double dv = -2.0 * rho_ * p / (u * u * u) -
                        2.0 * cx2 / (best * best * best);
      const double next = best - hv / dv;
      if (!(next > 0.0)) break;
      best = next;
    }
    if (std::abs(SegmentPhi(j, best) - delta) <= options.tol * delta)
      return best;
  }
  return SolveSegment(j, delta, lo, hi, options);
}

double FindTheta(std::span<const double> magnitudes, double xi, double rho,
                 double delta, const ThetaOptions& options) {
  return ThetaSearch(magnitudes, xi, rho).Solve(delta, options);
}

double PhiDirect(std::span<const double> magnitudes, double xi, double rho,
                 double theta) {
  double sum = 0.0;
  for (double a : magnitudes) {
    const double v = std::min(xi / theta, std::abs(a) / (1.0 + rho * theta));
    sum += v * v;
  }
  return std::sqrt(sum);
}

}  // namespace lrsd
