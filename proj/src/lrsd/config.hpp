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

// Solver selection and JSON configuration. Config files are JSON objects with
// an optional "schema_version" (currently 1); unknown keys are rejected so a
// typo cannot silently fall back to a default.

#pragma once

#include <string>

#include "json.hpp"
#include "lrsd/admm.hpp"
#include "lrsd/alm.hpp"
#include "lrsd/pspg.hpp"

namespace lrsd {

inline constexpr int kConfigSchemaVersion = 1;

enum class SolverKind { kIadm, kEadm, kAlm, kPspg };

const char* SolverKindName(SolverKind kind);
SolverKind ParseSolverKind(const std::string& name);

struct SolverConfig {
  SolverKind kind = SolverKind::kPspg;
  AdmmConfig admm;
  AlmConfig alm;
  PspgConfig pspg;
  // Replace S by the l1-minimal sparse part consistent with L and delta.
  bool postprocess = false;
};

// Defaults for `kind` overridden by the keys of `overrides` (may be null).
SolverConfig ParseSolverConfig(SolverKind kind, const nlohmann::json& overrides);
// Full snapshot of the effective settings for `config.kind`.
nlohmann::json SolverConfigToJson(const SolverConfig& config);

// Turns verification checks on where the solver has them.
void EnableVerification(SolverConfig& config);

DecompositionResult RunSolver(const Instance& instance,
                              const SolverConfig& config);

}  // namespace lrsd
