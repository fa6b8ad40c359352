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

#include "lrsd/pspg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lrsd/error.hpp"
#include "lrsd/solver_common.hpp"

namespace lrsd {

void ValidatePspgConfig(const PspgConfig& cfg) {
  if (!(cfg.mu0_factor > 0.0) || !std::isfinite(cfg.mu0_factor))
    throw InvalidConfig("mu0_factor must be positive");
  if (cfg.mu0 && !(*cfg.mu0 > 0.0 && std::isfinite(*cfg.mu0)))
    throw InvalidConfig("mu0 must be positive");
  if (!(cfg.eta > 0.0 && cfg.eta <= 1.0))
    throw InvalidConfig("eta must lie in (0, 1]");
  if (cfg.k_bar < 0) throw InvalidConfig("k_bar must be nonnegative");
  if (!(cfg.stop_factor > 0.0)) throw InvalidConfig("stop_factor must be positive");
  if (!(cfg.fallback_tol > 0.0)) throw InvalidConfig("fallback_tol must be positive");
  if (cfg.max_iters < 1) throw InvalidConfig("max_iters must be at least 1");
  if (cfg.fixed_iterations && *cfg.fixed_iterations < 1)
    throw InvalidConfig("fixed_iterations must be at least 1");
  if (!(cfg.theta_tol > 0.0)) throw InvalidConfig("theta_tol must be positive");
  if (!(cfg.delta_zero_cutoff >= 0.0))
    throw InvalidConfig("delta_zero_cutoff must be nonnegative");
}

const char* SubproblemCaseName(SubproblemCase c) {
  switch (c) {
    case SubproblemCase::kInterior:
      return "interior";
    case SubproblemCase::kBoundary:
      return "boundary";
    case SubproblemCase::kDeltaZero:
      return "delta_zero";
  }
  return "unknown";
}

Matrix ComputeQ(const Matrix& y, double mu, SvdStats* stats) {
  if (!(mu > 0.0)) throw InvalidArgument("mu must be positive");
  return ShrinkSingular(y, mu, stats);
}

SubproblemSolution SolveSubproblem(const Matrix& q, const Matrix& data,
                                   const ObservationMask& mask, double xi,
                                   double rho, double delta,
                                   const SubproblemOptions& options) {
  if (q.rows() != data.rows() || q.cols() != data.cols() ||
      data.rows() != mask.rows() || data.cols() != mask.cols())
    throw DimensionMismatch("subproblem shapes differ");
  if (!(xi > 0.0) || !(rho > 0.0))
    throw InvalidArgument("xi and rho must be positive");
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw InvalidArgument("delta must be nonnegative");

  const Matrix observed = mask.Project(data);
  const Matrix residual = mask.Project(data - q);  // pi(D - q)
  const Matrix q_off = mask.ProjectComplement(q);

  SubproblemSolution sol;
  if (delta <= options.delta_zero_cutoff * observed.norm()) {
    sol.case_tag = SubproblemCase::kDeltaZero;
    sol.sparse = ShrinkEntries(residual, xi * rho) - q_off;
    sol.low_rank = observed - sol.sparse;
    return sol;
  }

  const Vector mags = mask.GatherAbs(residual);
  const double theta = FindTheta(std::span<const double>(mags.data(), mags.size()),
                                 xi, rho, delta, options.theta);
  if (theta == 0.0) {
    sol.case_tag = SubproblemCase::kInterior;
    sol.low_rank = q;
    sol.sparse = -q_off;
    return sol;
  }
  sol.case_tag = SubproblemCase::kBoundary;
  sol.theta = theta;
  const double rt = rho * theta;
  sol.sparse = ShrinkEntries(residual, xi * (1.0 + rt) / theta) - q_off;
  sol.low_rank =
      mask.Project((rt / (1.0 + rt)) * (data - sol.sparse) + q / (1.0 + rt)) +
      q_off;
  return sol;
}

double KktResiduals::Max() const {
  return std::max({stationarity_l, stationarity_s, feasibility, dual_sign,
                   complementarity});
}

namespace {

// Distance of g from the subdifferential of |.| at s.
double SubgradientGap(double g, double s) {
  if (s != 0.0) return std::abs(g - Sign(s));
  return std::max(0.0, std::abs(g) - 1.0);
}

}  // namespace

KktResiduals CheckSubproblemKkt(const Matrix& q, const Matrix& data,
                                const ObservationMask& mask, double xi,
                                double rho, double delta,
                                const SubproblemSolution& sol,
                                double delta_zero_cutoff) {
  const Matrix& l = sol.low_rank;
  const Matrix& s = sol.sparse;
  if (l.rows() != q.rows() || l.cols() != q.cols() || s.rows() != q.rows() ||
      s.cols() != q.cols())
    throw DimensionMismatch("solution shape differs from q");
  const Matrix observed = mask.Project(data);
  const Matrix r = mask.Project(l + s - data);
  const Matrix step = (l - q) / rho;
  const Matrix off = mask.ProjectComplement(l + s);
  const double off_gap = off.size() ? off.cwiseAbs().maxCoeff() : 0.0;
  const double r_norm = r.norm();

  KktResiduals k;
  if (delta <= delta_zero_cutoff * observed.norm()) {
    // Multiplier is -(L - q)/rho; off the mask it must vanish.
    const Matrix step_off = mask.ProjectComplement(step);
    k.stationarity_l = step_off.size() ? step_off.cwiseAbs().maxCoeff() : 0.0;
    for (const auto& e : mask.entries()) {
      const double g = step(e.row, e.col) / xi;
      k.stationarity_s =
          std::max(k.stationarity_s, SubgradientGap(g, s(e.row, e.col)));
    }
    k.feasibility = std::max(r_norm, off_gap) / std::max(1.0, observed.norm());
    return k;
  }

  const double theta = sol.theta;
  const Matrix st = step + theta * r;
  const double step_max = step.size() ? step.cwiseAbs().maxCoeff() : 0.0;
  k.stationarity_l =
      (st.size() ? st.cwiseAbs().maxCoeff() : 0.0) / std::max(1.0, step_max);
  for (const auto& e : mask.entries()) {
    const double g = -theta * r(e.row, e.col) / xi;
    k.stationarity_s =
        std::max(k.stationarity_s, SubgradientGap(g, s(e.row, e.col)));
  }
  k.feasibility =
      std::max(std::max(0.0, r_norm - delta) / delta,
               off_gap / std::max(1.0, observed.norm()));
  k.dual_sign = std::max(0.0, -theta);
  k.complementarity =
      theta * std::abs(r_norm - delta) / std::max(1.0, theta * delta);
  return k;
}

DecompositionResult SolvePspg(const Instance& instance, const PspgConfig& cfg) {
  ValidateInstance(instance);
  ValidatePspgConfig(cfg);

  Stopwatch clock;
  const Matrix observed = instance.ObservedData();
  const ObservationMask& mask = instance.mask;
  const double xi = instance.xi;
  const double delta = instance.delta;

  double mu = cfg.mu0 ? *cfg.mu0 : cfg.mu0_factor * SpectralNorm(observed);
  if (!(mu > 0.0)) mu = 1.0;
  const bool noise_known = instance.noise_level && *instance.noise_level > 0.0 &&
                           delta > cfg.delta_zero_cutoff * observed.norm();
  const double stop_tol =
      noise_known ? cfg.stop_factor * *instance.noise_level : cfg.fallback_tol;
  const std::int64_t cap =
      cfg.fixed_iterations ? *cfg.fixed_iterations : cfg.max_iters;

  SubproblemOptions sub_opts;
  sub_opts.theta.tol = cfg.theta_tol;
  sub_opts.theta.use_quartic = cfg.use_quartic;
  sub_opts.delta_zero_cutoff = cfg.delta_zero_cutoff;

  DecompositionResult res;
  res.solver = "pspg";
  if (cfg.verify) res.max_subproblem_residual = 0.0;
  Matrix l = Matrix::Zero(observed.rows(), observed.cols());
  Matrix l_prev = l;
  Matrix s = observed;
  Matrix y = l;
  double t = 1.0;
  const double scale = observed.norm() > 0.0 ? observed.norm() : 1.0;

  for (std::int64_t k = 0; k < cap; ++k) {
    const std::int64_t lsv_before = res.svd.lsv_count;
    const Matrix q = ComputeQ(y, mu, &res.svd);
    SubproblemSolution sol =
        SolveSubproblem(q, observed, mask, xi, mu, delta, sub_opts);
    if (cfg.verify) {
      const KktResiduals kkt = CheckSubproblemKkt(q, observed, mask, xi, mu,
                                                  delta, sol,
                                                  cfg.delta_zero_cutoff);
      res.max_subproblem_residual =
          std::max(res.max_subproblem_residual, kkt.Max());
    }

    const double denom = std::sqrt(l.squaredNorm() + s.squaredNorm()) + 1.0;
    const double change = std::sqrt((sol.low_rank - l).squaredNorm() +
                                    (sol.sparse - s).squaredNorm()) /
                          denom;
    l_prev = std::move(l);
    l = std::move(sol.low_rank);
    s = std::move(sol.sparse);

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = l + ((t - 1.0) / t_next) * (l - l_prev);
    t = t_next;

    res.iterations = k + 1;
    res.trace.push_back({mu, (l + s - observed).norm() / scale, change,
                         res.svd.lsv_count - lsv_before});
    if (k <= cfg.k_bar) mu *= cfg.eta;
    if (!cfg.fixed_iterations && change <= stop_tol) {
      res.converged = true;
      break;
    }
  }
  if (cfg.fixed_iterations) res.converged = true;

  res.low_rank = std::move(l);
  res.sparse = std::move(s);
  FinalizeResult(instance, res);
  res.wall_seconds = clock.Seconds();
  return res;
}

}  // namespace lrsd
