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

// Experiment plumbing: result containers, verification checks, benchmark
// runs with CSV/text tables, and PGM frame export.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lrsd/config.hpp"
#include "lrsd/metrics.hpp"
#include "lrsd/problems.hpp"
#include "lrsd/result.hpp"

namespace lrsd {

// ---- Result container -----------------------------------------------------
// Directory with L.lrsd, S.lrsd, Lambda.lrsd (ADMM only) and result.json.

inline constexpr int kResultFormatVersion = 1;

struct StoredResult {
  DecompositionResult result;
  nlohmann::json config;  // effective solver settings
  std::string instance_id;
  std::optional<RecoveryMetrics> metrics;
};

void SaveResult(const StoredResult& stored, const std::filesystem::path& dir);
StoredResult LoadResult(const std::filesystem::path& dir);

nlohmann::json ResultSummaryJson(const DecompositionResult& result);

// ---- Verification ---------------------------------------------------------

struct CheckItem {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool passed = false;
};

struct CheckReport {
  std::vector<CheckItem> items;
  bool passed() const;
  nlohmann::json ToJson() const;
};

// Recomputes objective and infeasibility from the stored (L, S), checks them
// against the solver's termination rule, then reruns the solver with its
// optimality checks enabled and reports the largest residual.
CheckReport CheckSolution(const Instance& instance, const StoredResult& stored,
                          bool rerun = true);

// ---- Benchmarks -----------------------------------------------------------

struct RunRecord {
  std::size_t cell = 0;
  std::string experiment;
  std::string instance_id;
  std::uint64_t seed = 0;
  std::string solver;
  nlohmann::json config;
  std::int64_t iterations = 0;
  std::int64_t svd_count = 0;
  std::int64_t lsv_count = 0;
  double wall_seconds = 0.0;
  double objective = 0.0;
  double infeasibility = 0.0;  // relative
  std::optional<double> rel_l;
  std::optional<double> rel_s;
  Index rank = 0;
  bool converged = false;
  std::string error;  // non-empty when the cell failed
};

struct Bounds {
  std::optional<double> mean_rel_l;
  std::optional<double> mean_rel_s;
  std::optional<std::int64_t> max_svd;
  std::optional<std::int64_t> min_iterations;
  std::optional<std::int64_t> max_iterations;
};

// One (experiment, solver) group over its seeds.
struct GroupSummary {
  std::string experiment;
  std::string solver;
  std::size_t runs = 0;
  std::size_t failures = 0;
  double avg_iterations = 0.0, max_iterations = 0.0;
  double avg_svd = 0.0, max_svd = 0.0;
  double avg_lsv = 0.0, max_lsv = 0.0;
  double avg_rel_l = 0.0, max_rel_l = 0.0;
  double avg_rel_s = 0.0, max_rel_s = 0.0;
  double avg_seconds = 0.0, max_seconds = 0.0;
  bool has_metrics = false;
  std::vector<std::string> violations;
};

struct BenchReport {
  std::vector<RunRecord> records;  // ordered by cell index
  std::vector<GroupSummary> groups;
  std::size_t violation_count() const;
  std::size_t failure_count() const;
};

// Spec: {"schema_version": 1, "experiments": [{"name", "generator": {...},
//        "seeds": [...], "solvers": [{"solver", "config"}], "bounds": {...}}]}
BenchReport RunBenchmark(const nlohmann::json& spec, int threads = 0);

// RFC 4180 CSV of the records.
void WriteRecordsCsv(const std::vector<RunRecord>& records, std::ostream& out);
// Fixed-width avg / max table of the groups.
void WriteSummaryTable(const std::vector<GroupSummary>& groups,
                       std::ostream& out);
std::string CsvField(const std::string& field);

// ---- Image export ---------------------------------------------------------

// Column `frame` of x reshaped (column-major) to height x width and written
// as binary 8-bit PGM, scaled from [min, max] of that column onto [0, 255].
// A constant column is written as all zeros.
void ExportPgm(const Matrix& x, const std::filesystem::path& path,
               Index height, Index width, Index frame);

}  // namespace lrsd
