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

#include "lrsd/admm.hpp"

#include <cmath>
#include <string>

#include "lrsd/error.hpp"
#include "lrsd/solver_common.hpp"

namespace lrsd {

AdmmConfig AdmmConfig::IadmDefaults() { return AdmmConfig{}; }

AdmmConfig AdmmConfig::EadmDefaults() {
  AdmmConfig cfg;
  cfg.rho0_factor = 2.0;
  cfg.rho0_reference = Rho0Reference::kSignSpectral;
  cfg.eta = 1.0 / 6.0;
  return cfg;
}

void ValidateAdmmConfig(const AdmmConfig& cfg) {
  if (!(cfg.rho0_factor > 0.0) || !std::isfinite(cfg.rho0_factor))
    throw InvalidConfig("rho0_factor must be positive");
  if (cfg.rho0 && !(*cfg.rho0 > 0.0 && std::isfinite(*cfg.rho0)))
    throw InvalidConfig("rho0 must be positive");
  if (!(cfg.eta > 0.0 && cfg.eta <= 1.0))
    throw InvalidConfig("eta must lie in (0, 1]");
  if (!(cfg.rel_infeas_tol > 0.0))
    throw InvalidConfig("rel_infeas_tol must be positive");
  if (cfg.max_outer_iters < 1 || cfg.max_inner_iters < 1)
    throw InvalidConfig("iteration caps must be at least 1");
  if (!(cfg.inner_tol_factor >= 0.0))
    throw InvalidConfig("inner_tol_factor must be nonnegative");
  if (cfg.rho_floor && !(*cfg.rho_floor > 0.0))
    throw InvalidConfig("rho_floor must be positive");
}

Matrix ArgminLowRank(const Matrix& sparse, const Matrix& multiplier,
                     const Matrix& data, double rho, SvdStats* stats) {
  return ShrinkSingular(data + rho * multiplier - sparse, rho, stats);
}

Matrix ArgminSparse(const Matrix& low_rank, const Matrix& multiplier,
                    const Matrix& data, double rho, double xi) {
  return ShrinkEntries(data + rho * multiplier - low_rank, rho * xi);
}

namespace {

double InitialRho(const Matrix& data, const AdmmConfig& cfg) {
  if (cfg.rho0) return *cfg.rho0;
  double ref = 0.0;
  switch (cfg.rho0_reference) {
    case Rho0Reference::kSpectral:
      ref = SpectralNorm(data);
      break;
    case Rho0Reference::kSignSpectral:
      ref = SpectralNorm(data.unaryExpr([](double v) { return Sign(v); }));
      break;
    case Rho0Reference::kFrobenius:
      ref = data.norm();
      break;
  }
  const double rho0 = cfg.rho0_factor * ref;
  // D = 0: any positive value works, the first iterate is already exact.
  return rho0 > 0.0 ? rho0 : 1.0;
}

DecompositionResult RunAdmm(const Instance& instance, const AdmmConfig& cfg,
                            bool exact, const char* name) {
  ValidateInstance(instance);
  ValidateAdmmConfig(cfg);
  if (!instance.mask.is_full())
    throw InvalidArgument(std::string(name) + " requires a full mask");
  if (instance.delta != 0.0)
    throw InvalidArgument(std::string(name) + " requires delta = 0");

  Stopwatch clock;
  const Matrix& d = instance.data;
  const double xi = instance.xi;
  const double d_norm = d.norm();
  const double rho0 = InitialRho(d, cfg);
  const double floor = cfg.rho_floor ? *cfg.rho_floor : rho0 * std::pow(cfg.eta, 60);
  const std::int64_t inner_cap = exact ? cfg.max_inner_iters : 1;

  DecompositionResult res;
  res.solver = name;
  Matrix l = Matrix::Zero(d.rows(), d.cols());
  Matrix s = Matrix::Zero(d.rows(), d.cols());
  Matrix lambda = Matrix::Zero(d.rows(), d.cols());
  double rho = rho0;

  for (std::int64_t k = 0; k < cfg.max_outer_iters; ++k) {
    const std::int64_t before = res.svd.lsv_count;
    for (std::int64_t j = 0; j < inner_cap; ++j) {
      Matrix l_new = ArgminLowRank(s, lambda, d, rho, &res.svd);
      Matrix s_new = ArgminSparse(l_new, lambda, d, rho, xi);
      const double moved =
          std::max((l_new - l).norm(), (s_new - s).norm());
      l = std::move(l_new);
      s = std::move(s_new);
      if (moved <= cfg.inner_tol_factor * d_norm) break;
    }
    const Matrix r = l + s - d;
    lambda -= r / rho;
    res.iterations = k + 1;
    const double infeas = d_norm > 0.0 ? r.norm() / d_norm : r.norm();
    res.trace.push_back({rho, infeas, 0.0, res.svd.lsv_count - before});
    if (infeas < cfg.rel_infeas_tol) {
      res.converged = true;
      break;
    }
    rho = ContinuationValue(rho0, cfg.eta, k + 1, floor);
  }

  res.low_rank = std::move(l);
  res.sparse = std::move(s);
  res.multiplier = std::move(lambda);
  FinalizeResult(instance, res);
  res.wall_seconds = clock.Seconds();
  return res;
}

}  // namespace

DecompositionResult SolveIadm(const Instance& instance, const AdmmConfig& cfg) {
  return RunAdmm(instance, cfg, false, "iadm");
}

DecompositionResult SolveEadm(const Instance& instance, const AdmmConfig& cfg) {
  return RunAdmm(instance, cfg, true, "eadm");
}

}  // namespace lrsd
