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

// Problem instances: data, observation mask, noise bound and weight, plus the
// synthetic generators and the on-disk instance container.

#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "json.hpp"
#include "lrsd/linalg.hpp"

namespace lrsd {

struct GroundTruth {
  Matrix low_rank;  // L0
  Matrix sparse;    // S0
  Matrix noise;     // N0 (zero for noiseless instances)
  Index rank = 0;
  Index support_size = 0;
};

enum class GeneratorKind { kRpcpMissing, kSpcp };

// How the SPCP noise bound delta is derived from the noise level rho.
//   kDimension: delta = sqrt(n + sqrt(8 n)) * rho, n = max(rows, cols).
//   kEntrywise: delta = sqrt(N + sqrt(8 N)) * rho, N = rows * cols, i.e. the
//               mean plus two standard deviations of ||N0||_F^2 / rho^2.
enum class DeltaRule { kDimension, kEntrywise };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kRpcpMissing;
  Index rows = 0;
  Index cols = 0;
  double rank_ratio = 0.05;      // c_r
  double sparsity_ratio = 0.05;  // c_p
  double sample_ratio = 1.0;     // SR (RPCP with missing data only)
  double snr_db = std::numeric_limits<double>::infinity();  // SPCP only
  DeltaRule delta_rule = DeltaRule::kDimension;
  std::uint64_t seed = 0;
};

struct Instance {
  Instance(Matrix d, ObservationMask m, double delta_in, double xi_in)
      : data(std::move(d)), mask(std::move(m)), delta(delta_in), xi(xi_in) {}

  Matrix data;  // D; entries off the mask are ignored by every solver
  ObservationMask mask;
  double delta = 0.0;
  double xi = 0.0;
  std::optional<double> noise_level;  // rho, when known
  std::optional<GroundTruth> truth;
  std::optional<GeneratorSpec> generator;
  std::string id;

  Index rows() const { return data.rows(); }
  Index cols() const { return data.cols(); }
  Matrix ObservedData() const { return mask.Project(data); }
};

// Validates shapes and scalar fields; throws on violation.
void ValidateInstance(const Instance& instance);

// Builds an instance from raw data with a default xi of 1/sqrt(max(m, n)).
Instance MakeInstance(Matrix data, ObservationMask mask, double delta = 0.0,
                      std::optional<double> xi = std::nullopt);

// Rounds to the nearest integer with a floor of 1.
Index RoundCount(double value);

// Random RPCP instance with a uniformly sampled observation set.
Instance GenerateRpcpMissing(const GeneratorSpec& spec);
Instance GenerateRpcpMissing(Index n, double c_r, double c_p,
                             double sample_ratio, std::uint64_t seed);

// Noise standard deviation giving the requested SNR (dB) for the synthetic
// model L0 + S0 + N0.
double RhoFromSnr(Index n, double c_r, double c_p, double snr_db);
double SnrFromRho(Index n, double c_r, double c_p, double rho);

double DeltaFromRho(Index rows, Index cols, double rho, DeltaRule rule);

// Random SPCP instance (full observation, dense Gaussian noise).
Instance GenerateSpcp(const GeneratorSpec& spec);
Instance GenerateSpcp(Index n, double c_r, double c_p, double snr_db,
                      std::uint64_t seed);

Instance Generate(const GeneratorSpec& spec);

// Stable identifier built from generator parameters and seed.
std::string InstanceId(const GeneratorSpec& spec);

const char* GeneratorKindName(GeneratorKind kind);
GeneratorKind ParseGeneratorKind(const std::string& name);
const char* DeltaRuleName(DeltaRule rule);
DeltaRule ParseDeltaRule(const std::string& name);

// JSON form used by manifests, bench specs and the C API. Parsing accepts
// "n" for square shapes and fills unspecified ratios with defaults.
nlohmann::json GeneratorSpecToJson(const GeneratorSpec& spec);
GeneratorSpec GeneratorSpecFromJson(const nlohmann::json& j);

// Directory container: manifest.json, D.lrsd, mask.csv, and L0/S0/N0.lrsd
// when ground truth is present.
inline constexpr int kInstanceFormatVersion = 1;
void SaveInstance(const Instance& instance, const std::filesystem::path& dir);
Instance LoadInstance(const std::filesystem::path& dir);

}  // namespace lrsd
