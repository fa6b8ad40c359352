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

#include "lrsd/config.hpp"

#include <set>

#include "lrsd/error.hpp"
#include "lrsd/metrics.hpp"
#include "lrsd/solver_common.hpp"

namespace lrsd {

using nlohmann::json;

const char* SolverKindName(SolverKind kind) {
  switch (kind) {
    case SolverKind::kIadm:
      return "iadm";
    case SolverKind::kEadm:
      return "eadm";
    case SolverKind::kAlm:
      return "alm";
    case SolverKind::kPspg:
      return "pspg";
  }
  return "unknown";
}

SolverKind ParseSolverKind(const std::string& name) {
  if (name == "iadm") return SolverKind::kIadm;
  if (name == "eadm") return SolverKind::kEadm;
  if (name == "alm") return SolverKind::kAlm;
  if (name == "pspg") return SolverKind::kPspg;
  throw InvalidConfig("unknown solver '" + name + "'");
}

namespace {

// Reads typed keys out of a JSON object and remembers which were used.
class Reader {
 public:
  explicit Reader(const json& obj) : obj_(obj) {
    if (!obj_.is_object()) throw InvalidConfig("config must be a JSON object");
  }

  template <class T>
  void Get(const char* key, T& out) {
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    used_.insert(key);
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw InvalidConfig(std::string("config key '") + key + "' has the wrong type");
    }
  }

  template <class T>
  void GetOptional(const char* key, std::optional<T>& out) {
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    used_.insert(key);
    if (it->is_null()) {
      out.reset();
      return;
    }
    T v{};
    Get(key, v);
    out = v;
  }

  void Mark(const char* key) { used_.insert(key); }

  void RejectUnknown() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!used_.count(it.key()))
        throw InvalidConfig("unknown config key '" + it.key() + "'");
    }
  }

 private:
  const json& obj_;
  std::set<std::string> used_;
};

Rho0Reference ParseReference(const std::string& s) {
  if (s == "spectral") return Rho0Reference::kSpectral;
  if (s == "sign_spectral") return Rho0Reference::kSignSpectral;
  if (s == "frobenius") return Rho0Reference::kFrobenius;
  throw InvalidConfig("unknown rho0_reference '" + s + "'");
}

const char* ReferenceName(Rho0Reference r) {
  switch (r) {
    case Rho0Reference::kSpectral:
      return "spectral";
    case Rho0Reference::kSignSpectral:
      return "sign_spectral";
    case Rho0Reference::kFrobenius:
      return "frobenius";
  }
  return "unknown";
}

SmoothingTie ParseTie(const std::string& s) {
  if (s == "scaled_nu") return SmoothingTie::kScaledNu;
  if (s == "tied") return SmoothingTie::kTiedToRho;
  if (s == "fixed") return SmoothingTie::kFixed;
  throw InvalidConfig("unknown smoothing_tie '" + s + "'");
}

const char* TieName(SmoothingTie t) {
  switch (t) {
    case SmoothingTie::kScaledNu:
      return "scaled_nu";
    case SmoothingTie::kTiedToRho:
      return "tied";
    case SmoothingTie::kFixed:
      return "fixed";
  }
  return "unknown";
}

template <class T>
json OptionalJson(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

SolverConfig ParseSolverConfig(SolverKind kind, const json& overrides) {
  SolverConfig cfg;
  cfg.kind = kind;
  cfg.admm = kind == SolverKind::kEadm ? AdmmConfig::EadmDefaults()
                                       : AdmmConfig::IadmDefaults();
  if (overrides.is_null()) return cfg;
  Reader r(overrides);
  int version = kConfigSchemaVersion;
  r.Get("schema_version", version);
  if (version != kConfigSchemaVersion)
    throw InvalidConfig("unsupported config schema_version " +
                        std::to_string(version));
  std::string solver;
  r.Get("solver", solver);
  if (!solver.empty() && ParseSolverKind(solver) != kind)
    throw InvalidConfig("config is for solver '" + solver + "'");
  r.Get("postprocess", cfg.postprocess);

  switch (kind) {
    case SolverKind::kIadm:
    case SolverKind::kEadm: {
      AdmmConfig& c = cfg.admm;
      std::string ref;
      r.Get("rho0_factor", c.rho0_factor);
      r.Get("rho0_reference", ref);
      if (!ref.empty()) c.rho0_reference = ParseReference(ref);
      r.GetOptional("rho0", c.rho0);
      r.Get("eta", c.eta);
      r.Get("rel_infeas_tol", c.rel_infeas_tol);
      r.Get("max_iters", c.max_outer_iters);
      r.Get("inner_tol_factor", c.inner_tol_factor);
      r.Get("max_inner_iters", c.max_inner_iters);
      r.GetOptional("rho_floor", c.rho_floor);
      ValidateAdmmConfig(c);
      break;
    }
    case SolverKind::kAlm: {
      AlmConfig& c = cfg.alm;
      std::optional<std::string> ref;
      std::string tie;
      r.Get("rho0_factor", c.rho0_factor);
      r.GetOptional("rho0_reference", ref);
      c.rho0_reference.reset();
      if (ref) c.rho0_reference = ParseReference(*ref);
      r.GetOptional("rho0", c.rho0);
      r.Get("eta", c.eta);
      r.Get("rel_infeas_tol", c.rel_infeas_tol);
      r.Get("max_iters", c.max_iters);
      r.GetOptional("rho_floor", c.rho_floor);
      r.Get("smoothing_tie", tie);
      if (!tie.empty()) c.smoothing_tie = ParseTie(tie);
      r.GetOptional("nu_scale", c.nu_scale);
      r.Get("fixed_mu", c.fixed_mu);
      r.Get("fixed_nu", c.fixed_nu);
      r.Get("exact_svd", c.exact_svd);
      r.Get("verify", c.verify);
      r.Get("monotonicity_slack", c.monotonicity_slack);
      ValidateAlmConfig(c);
      break;
    }
    case SolverKind::kPspg: {
      PspgConfig& c = cfg.pspg;
      r.Get("mu0_factor", c.mu0_factor);
      r.GetOptional("mu0", c.mu0);
      r.Get("eta", c.eta);
      r.Get("k_bar", c.k_bar);
      r.Get("stop_factor", c.stop_factor);
      r.Get("fallback_tol", c.fallback_tol);
      r.Get("max_iters", c.max_iters);
      r.GetOptional("fixed_iterations", c.fixed_iterations);
      r.Get("theta_tol", c.theta_tol);
      r.Get("use_quartic", c.use_quartic);
      r.Get("delta_zero_cutoff", c.delta_zero_cutoff);
      r.Get("verify", c.verify);
      ValidatePspgConfig(c);
      break;
    }
  }
  r.RejectUnknown();
  return cfg;
}

json SolverConfigToJson(const SolverConfig& cfg) {
  json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["solver"] = SolverKindName(cfg.kind);
  j["postprocess"] = cfg.postprocess;
  switch (cfg.kind) {
    case SolverKind::kIadm:
    case SolverKind::kEadm: {
      const AdmmConfig& c = cfg.admm;
      j["rho0_factor"] = c.rho0_factor;
      j["rho0_reference"] = ReferenceName(c.rho0_reference);
      j["rho0"] = OptionalJson(c.rho0);
      j["eta"] = c.eta;
      j["rel_infeas_tol"] = c.rel_infeas_tol;
      j["max_iters"] = c.max_outer_iters;
      j["inner_tol_factor"] = c.inner_tol_factor;
      j["max_inner_iters"] = c.max_inner_iters;
      j["rho_floor"] = OptionalJson(c.rho_floor);
      break;
    }
    case SolverKind::kAlm: {
      const AlmConfig& c = cfg.alm;
      j["rho0_factor"] = c.rho0_factor;
      j["rho0_reference"] = c.rho0_reference
                                ? json(ReferenceName(*c.rho0_reference))
                                : json(nullptr);
      j["rho0"] = OptionalJson(c.rho0);
      j["eta"] = c.eta;
      j["rel_infeas_tol"] = c.rel_infeas_tol;
      j["max_iters"] = c.max_iters;
      j["rho_floor"] = OptionalJson(c.rho_floor);
      j["smoothing_tie"] = TieName(c.smoothing_tie);
      j["nu_scale"] = OptionalJson(c.nu_scale);
      j["fixed_mu"] = c.fixed_mu;
      j["fixed_nu"] = c.fixed_nu;
      j["exact_svd"] = c.exact_svd;
      j["verify"] = c.verify;
      j["monotonicity_slack"] = c.monotonicity_slack;
      break;
    }
    case SolverKind::kPspg: {
      const PspgConfig& c = cfg.pspg;
      j["mu0_factor"] = c.mu0_factor;
      j["mu0"] = OptionalJson(c.mu0);
      j["eta"] = c.eta;
      j["k_bar"] = c.k_bar;
      j["stop_factor"] = c.stop_factor;
      j["fallback_tol"] = c.fallback_tol;
      j["max_iters"] = c.max_iters;
      j["fixed_iterations"] = OptionalJson(c.fixed_iterations);
      j["theta_tol"] = c.theta_tol;
      j["use_quartic"] = c.use_quartic;
      j["delta_zero_cutoff"] = c.delta_zero_cutoff;
      j["verify"] = c.verify;
      break;
    }
  }
  return j;
}

void EnableVerification(SolverConfig& config) {
  config.alm.verify = true;
  config.pspg.verify = true;
}

DecompositionResult RunSolver(const Instance& instance,
                              const SolverConfig& config) {
  DecompositionResult res;
  switch (config.kind) {
    case SolverKind::kIadm:
      res = SolveIadm(instance, config.admm);
      break;
    case SolverKind::kEadm:
      res = SolveEadm(instance, config.admm);
      break;
    case SolverKind::kAlm:
      res = SolveAlm(instance, config.alm);
      break;
    case SolverKind::kPspg:
      res = SolvePspg(instance, config.pspg);
      break;
  }
  if (config.postprocess && instance.delta > 0.0) {
    res.sparse = PostprocessS(res.low_rank, instance.data, instance.delta,
                              instance.mask);
    FinalizeResult(instance, res);
  }
  return res;
}

}  // namespace lrsd
