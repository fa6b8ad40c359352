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

#include "lrsd/alm.hpp"

#include <algorithm>
#include <cmath>

#include "lrsd/error.hpp"
#include "lrsd/smoothing.hpp"
#include "lrsd/solver_common.hpp"

namespace lrsd {

void ValidateAlmConfig(const AlmConfig& cfg) {
  if (!(cfg.rho0_factor > 0.0) || !std::isfinite(cfg.rho0_factor))
    throw InvalidConfig("rho0_factor must be positive");
  if (cfg.rho0 && !(*cfg.rho0 > 0.0 && std::isfinite(*cfg.rho0)))
    throw InvalidConfig("rho0 must be positive");
  if (!(cfg.eta > 0.0 && cfg.eta <= 1.0))
    throw InvalidConfig("eta must lie in (0, 1]");
  if (!(cfg.rel_infeas_tol > 0.0))
    throw InvalidConfig("rel_infeas_tol must be positive");
  if (cfg.max_iters < 1) throw InvalidConfig("max_iters must be at least 1");
  if (cfg.rho_floor && !(*cfg.rho_floor > 0.0))
    throw InvalidConfig("rho_floor must be positive");
  if (cfg.smoothing_tie == SmoothingTie::kFixed &&
      !(cfg.fixed_mu > 0.0 && cfg.fixed_nu > 0.0))
    throw InvalidConfig("fixed smoothing needs positive mu and nu");
  if (cfg.nu_scale && !(*cfg.nu_scale > 0.0 && std::isfinite(*cfg.nu_scale)))
    throw InvalidConfig("nu_scale must be positive");
  if (!(cfg.monotonicity_slack >= 0.0))
    throw InvalidConfig("monotonicity_slack must be nonnegative");
}

Matrix AlmUpdateL(const Matrix& sparse, const Matrix& observed, double rho,
                  double mu, double nu, double xi, const ObservationMask& mask,
                  std::optional<double> threshold, SvdStats* stats,
                  SvdFactors* factors) {
  if (!(rho > 0.0 && mu > 0.0 && nu > 0.0))
    throw InvalidArgument("rho, mu and nu must be positive");
  const Matrix m = rho * GradGNu(sparse, nu, xi, mask) - sparse + observed;
  SvdFactors f = PartialSvd(m, threshold.value_or(mu));
  if (stats) stats->Record(f);
  for (Index i = 0; i < f.count(); ++i) {
    const double s = f.values(i);
    f.values(i) = s - rho * s / std::max(s, rho + mu);
  }
  Matrix out = f.Reconstruct();
  if (factors) *factors = std::move(f);
  return out;
}

Matrix AlmUpdateS(const Matrix& low_rank, const Matrix& observed, double rho,
                  double mu, double nu, double xi, const ObservationMask& mask,
                  const SvdFactors* factors_of_low_rank) {
  if (!(rho > 0.0 && mu > 0.0 && nu > 0.0))
    throw InvalidArgument("rho, mu and nu must be positive");
  const Matrix w = factors_of_low_rank ? GradFMu(*factors_of_low_rank, mu)
                                       : GradFMu(low_rank, mu);
  Matrix b = rho * w - low_rank + observed;
  const double shrink = nu / (nu + rho);
  const double cut = rho * xi;
  auto update = [&](double v) {
    const double a = std::abs(v);
    return Sign(v) * std::max(shrink * a, a - cut);
  };
  if (mask.is_full()) return b.unaryExpr(update);
  for (const auto& e : mask.entries()) b(e.row, e.col) = update(b(e.row, e.col));
  return b;
}

double AlmLResidual(const Matrix& low_rank, const Matrix& sparse,
                    const Matrix& observed, double rho, double mu, double nu,
                    double xi, const ObservationMask& mask) {
  const Matrix r = GradFMu(low_rank, mu) +
                   (low_rank + sparse - observed) / rho -
                   GradGNu(sparse, nu, xi, mask);
  return r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
}

double AlmSResidual(const Matrix& low_rank, const Matrix& sparse,
                    const Matrix& observed, double rho, double mu, double nu,
                    double xi, const ObservationMask& mask) {
  const Matrix r = -GradFMu(low_rank, mu) +
                   (low_rank + sparse - observed) / rho +
                   GradGNu(sparse, nu, xi, mask);
  return r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
}

double FeasiblePairObjective(const Matrix& sparse, const Matrix& observed,
                             double mu, double nu, double xi,
                             const ObservationMask& mask) {
  return FMuValue(observed - sparse, mu) + GNuValue(sparse, nu, xi, mask);
}

namespace {

double InitialRho(const Instance& instance, const Matrix& observed,
                  const AlmConfig& cfg) {
  if (cfg.rho0) return *cfg.rho0;
  if (cfg.smoothing_tie == SmoothingTie::kFixed)
    return std::min(cfg.fixed_mu, cfg.fixed_nu);
  const Rho0Reference ref = cfg.rho0_reference.value_or(
      instance.mask.is_full() ? Rho0Reference::kSpectral
                              : Rho0Reference::kFrobenius);
  double norm = 0.0;
  switch (ref) {
    case Rho0Reference::kSpectral:
      norm = SpectralNorm(observed);
      break;
    case Rho0Reference::kSignSpectral:
      norm = SpectralNorm(observed.unaryExpr([](double v) { return Sign(v); }));
      break;
    case Rho0Reference::kFrobenius:
      norm = observed.norm();
      break;
  }
  const double rho0 = cfg.rho0_factor * norm;
  return rho0 > 0.0 ? rho0 : 1.0;
}

}  // namespace

DecompositionResult SolveAlm(const Instance& instance, const AlmConfig& cfg) {
  ValidateInstance(instance);
  ValidateAlmConfig(cfg);
  if (instance.delta != 0.0)
    throw InvalidArgument("alm requires delta = 0");

  Stopwatch clock;
  const Matrix observed = instance.ObservedData();
  const ObservationMask& mask = instance.mask;
  const double xi = instance.xi;
  const double scale = observed.norm();
  const double rho0 = InitialRho(instance, observed, cfg);
  const double floor =
      cfg.rho_floor ? *cfg.rho_floor : rho0 * std::pow(cfg.eta, 60);

  DecompositionResult res;
  res.solver = "alm";
  if (cfg.verify) res.max_subproblem_residual = 0.0;
  Matrix l = Matrix::Zero(observed.rows(), observed.cols());
  Matrix s = observed;
  double rho = rho0;

  for (std::int64_t k = 0; k < cfg.max_iters; ++k) {
    double mu = rho;
    double nu = rho;
    switch (cfg.smoothing_tie) {
      case SmoothingTie::kScaledNu:
        nu = cfg.nu_scale.value_or(xi) * rho;
        break;
      case SmoothingTie::kTiedToRho:
        break;
      case SmoothingTie::kFixed:
        mu = cfg.fixed_mu;
        nu = cfg.fixed_nu;
        break;
    }
    // rho <= min(mu, nu); the scaled mode keeps only the mu side.
    const double bound = cfg.smoothing_tie == SmoothingTie::kScaledNu
                             ? mu
                             : std::min(mu, nu);
    if (rho > bound * (1.0 + 1e-12))
      throw InvalidConfig("rho exceeds the smoothing parameters");

    double before = 0.0;
    if (cfg.verify)
      before = FeasiblePairObjective(s, observed, mu, nu, xi, mask);

    const std::int64_t lsv_before = res.svd.lsv_count;
    SvdFactors factors;
    std::optional<double> threshold;
    if (cfg.exact_svd) threshold = 0.0;
    // Accelerated variants would insert an extrapolation of (L, S) here.
    Matrix l_next = AlmUpdateL(s, observed, rho, mu, nu, xi, mask, threshold,
                               &res.svd, &factors);
    Matrix s_next = AlmUpdateS(l_next, observed, rho, mu, nu, xi, mask, &factors);

    if (cfg.verify) {
      // The L-update residual is checked on the exact update from the same
      // S, since the thresholded SVD drops small singular values.
      const Matrix l_exact = cfg.exact_svd
                                 ? l_next
                                 : AlmUpdateL(s, observed, rho, mu, nu, xi,
                                              mask, 0.0);
      const Matrix m = rho * GradGNu(s, nu, xi, mask) - s + observed;
      const double rl = AlmLResidual(l_exact, s, observed, rho, mu, nu, xi,
                                     mask) /
                        (1.0 + m.norm());
      const double rs =
          AlmSResidual(l_next, s_next, observed, rho, mu, nu, xi, mask);
      res.max_subproblem_residual =
          std::max({res.max_subproblem_residual, rl, rs});
      const double after =
          FeasiblePairObjective(s_next, observed, mu, nu, xi, mask);
      if (after > before + cfg.monotonicity_slack * std::max(1.0, std::abs(before)))
        ++res.monotonicity_warnings;
    }

    l = std::move(l_next);
    s = std::move(s_next);
    const double infeas =
        (l + s - observed).norm() / (scale > 0.0 ? scale : 1.0);
    res.iterations = k + 1;
    res.trace.push_back({rho, infeas, 0.0, res.svd.lsv_count - lsv_before});
    if (infeas < cfg.rel_infeas_tol) {
      res.converged = true;
      break;
    }
    rho = ContinuationValue(rho0, cfg.eta, k + 1, floor);
  }

  res.low_rank = std::move(l);
  res.sparse = std::move(s);
  FinalizeResult(instance, res);
  res.wall_seconds = clock.Seconds();
  return res;
}

}  // namespace lrsd
