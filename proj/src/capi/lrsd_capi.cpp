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

#include "lrsd.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lrsd/config.hpp"
#include "lrsd/error.hpp"
#include "lrsd/harness.hpp"
#include "lrsd/matrix_io.hpp"
#include "lrsd/metrics.hpp"
#include "lrsd/problems.hpp"

struct lrsd_instance {
  explicit lrsd_instance(lrsd::Instance i) : inst(std::move(i)) {}
  lrsd::Instance inst;
};

struct lrsd_result {
  lrsd::StoredResult stored;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

lrsd_status Fail(lrsd_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs fn and converts any exception into a status code.
template <typename Fn>
lrsd_status Guard(Fn&& fn) {
  try {
    fn();
    return LRSD_OK;
  } catch (const lrsd::Error& e) {
    return Fail(static_cast<lrsd_status>(e.code()), e.what());
  } catch (const json::exception& e) {
    return Fail(LRSD_ERR_INVALID_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(LRSD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(LRSD_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(LRSD_ERR_INTERNAL, "unknown failure");
  }
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json ParseJson(const char* text) {
  if (!text || !*text) return json(nullptr);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw lrsd::InvalidConfig(std::string("malformed JSON: ") + e.what());
  }
}

void Require(const void* p, const char* what) {
  if (!p) throw lrsd::InvalidArgument(std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* lrsd_version(void) { return "1.0.0"; }

const char* lrsd_last_error(void) { return g_last_error.c_str(); }

const char* lrsd_status_name(lrsd_status status) {
  switch (status) {
    case LRSD_OK: return "ok";
    case LRSD_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case LRSD_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
    case LRSD_ERR_INVALID_CONFIG: return "invalid_config";
    case LRSD_ERR_IO: return "io_error";
    case LRSD_ERR_FORMAT: return "format_error";
    case LRSD_ERR_SVD_NONCONVERGENCE: return "svd_nonconvergence";
    case LRSD_ERR_THETA_SEARCH: return "theta_search_failure";
    case LRSD_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

void lrsd_string_free(char* s) { std::free(s); }

lrsd_status lrsd_instance_generate(const char* spec_json, lrsd_instance** out) {
  return Guard([&] {
    Require(out, "out");
    *out = nullptr;
    const json j = ParseJson(spec_json);
    if (!j.is_object()) throw lrsd::InvalidConfig("generator spec must be an object");
    *out = new lrsd_instance(lrsd::Generate(lrsd::GeneratorSpecFromJson(j)));
  });
}

lrsd_status lrsd_instance_from_data(const double* data, int64_t rows,
                                    int64_t cols, const int64_t* mask_rows,
                                    const int64_t* mask_cols,
                                    int64_t mask_count, double delta, double xi,
                                    lrsd_instance** out) {
  return Guard([&] {
    Require(out, "out");
    *out = nullptr;
    Require(data, "data");
    if (rows <= 0 || cols <= 0)
      throw lrsd::InvalidArgument("rows and cols must be positive");
    if (mask_count < 0) throw lrsd::InvalidArgument("mask_count is negative");
    lrsd::Matrix d = Eigen::Map<const lrsd::Matrix>(data, rows, cols);
    lrsd::ObservationMask mask = lrsd::ObservationMask::Full(rows, cols);
    if (mask_count > 0) {
      Require(mask_rows, "mask_rows");
      Require(mask_cols, "mask_cols");
      std::vector<lrsd::ObservationMask::Entry> entries;
      entries.reserve(static_cast<std::size_t>(mask_count));
      for (int64_t k = 0; k < mask_count; ++k)
        entries.push_back({mask_rows[k], mask_cols[k]});
      mask = lrsd::ObservationMask::FromEntries(rows, cols, std::move(entries));
    }
    std::optional<double> weight;
    if (xi > 0.0) weight = xi;
    *out = new lrsd_instance(
        lrsd::MakeInstance(std::move(d), std::move(mask), delta, weight));
  });
}

lrsd_status lrsd_instance_load(const char* dir, lrsd_instance** out) {
  return Guard([&] {
    Require(out, "out");
    *out = nullptr;
    Require(dir, "dir");
    *out = new lrsd_instance(lrsd::LoadInstance(dir));
  });
}

lrsd_status lrsd_instance_save(const lrsd_instance* inst, const char* dir) {
  return Guard([&] {
    Require(inst, "instance");
    Require(dir, "dir");
    lrsd::SaveInstance(inst->inst, dir);
  });
}

lrsd_status lrsd_instance_info(const lrsd_instance* inst, char** json_out) {
  return Guard([&] {
    Require(inst, "instance");
    Require(json_out, "json_out");
    const lrsd::Instance& i = inst->inst;
    json j;
    j["id"] = i.id;
    j["rows"] = i.rows();
    j["cols"] = i.cols();
    j["xi"] = i.xi;
    j["delta"] = i.delta;
    j["observed"] = i.mask.size();
    j["full_mask"] = i.mask.is_full();
    j["noise_level"] = i.noise_level ? json(*i.noise_level) : json(nullptr);
    j["has_truth"] = i.truth.has_value();
    if (i.truth) {
      j["true_rank"] = i.truth->rank;
      j["true_support"] = i.truth->support_size;
    }
    if (i.generator) j["generator"] = lrsd::GeneratorSpecToJson(*i.generator);
    *json_out = Dup(j.dump());
  });
}

void lrsd_instance_free(lrsd_instance* inst) { delete inst; }

lrsd_status lrsd_solve(const lrsd_instance* inst, const char* solver,
                       const char* config_json, lrsd_result** out) {
  return Guard([&] {
    Require(out, "out");
    *out = nullptr;
    Require(inst, "instance");
    Require(solver, "solver");
    const lrsd::SolverKind kind = lrsd::ParseSolverKind(solver);
    const lrsd::SolverConfig cfg =
        lrsd::ParseSolverConfig(kind, ParseJson(config_json));
    auto res = std::make_unique<lrsd_result>();
    res->stored.result = lrsd::RunSolver(inst->inst, cfg);
    res->stored.config = lrsd::SolverConfigToJson(cfg);
    res->stored.instance_id = inst->inst.id;
    if (inst->inst.truth)
      res->stored.metrics =
          lrsd::ComputeMetrics(res->stored.result.low_rank,
                               res->stored.result.sparse, *inst->inst.truth,
                               inst->inst.mask);
    *out = res.release();
  });
}

lrsd_status lrsd_result_summary(const lrsd_result* res, char** json_out) {
  return Guard([&] {
    Require(res, "result");
    Require(json_out, "json_out");
    json j = lrsd::ResultSummaryJson(res->stored.result);
    j["instance_id"] = res->stored.instance_id;
    j["config"] = res->stored.config;
    if (res->stored.metrics) {
      j["rel_l"] = res->stored.metrics->rel_l;
      j["rel_s"] = res->stored.metrics->rel_s;
    }
    *json_out = Dup(j.dump());
  });
}

lrsd_status lrsd_result_dims(const lrsd_result* res, int64_t* rows,
                             int64_t* cols) {
  return Guard([&] {
    Require(res, "result");
    if (rows) *rows = res->stored.result.low_rank.rows();
    if (cols) *cols = res->stored.result.low_rank.cols();
  });
}

lrsd_status lrsd_result_copy(const lrsd_result* res, lrsd_component which,
                             double* buf, size_t len) {
  return Guard([&] {
    Require(res, "result");
    Require(buf, "buf");
    const lrsd::DecompositionResult& r = res->stored.result;
    const lrsd::Matrix* m = nullptr;
    switch (which) {
      case LRSD_LOW_RANK: m = &r.low_rank; break;
      case LRSD_SPARSE: m = &r.sparse; break;
      case LRSD_MULTIPLIER:
        if (!r.multiplier)
          throw lrsd::InvalidArgument("this solver keeps no multiplier");
        m = &*r.multiplier;
        break;
      default: throw lrsd::InvalidArgument("unknown component");
    }
    if (len < static_cast<size_t>(m->size()))
      throw lrsd::DimensionMismatch("buffer holds " + std::to_string(len) +
                                    " values, need " + std::to_string(m->size()));
    std::memcpy(buf, m->data(), sizeof(double) * static_cast<size_t>(m->size()));
  });
}

lrsd_status lrsd_result_metrics(const lrsd_result* res, double* rel_l,
                                double* rel_s) {
  return Guard([&] {
    Require(res, "result");
    if (!res->stored.metrics)
      throw lrsd::InvalidArgument("result has no ground-truth metrics");
    if (rel_l) *rel_l = res->stored.metrics->rel_l;
    if (rel_s) *rel_s = res->stored.metrics->rel_s;
  });
}

lrsd_status lrsd_result_save(const lrsd_result* res, const char* dir) {
  return Guard([&] {
    Require(res, "result");
    Require(dir, "dir");
    lrsd::SaveResult(res->stored, dir);
  });
}

lrsd_status lrsd_result_load(const char* dir, lrsd_result** out) {
  return Guard([&] {
    Require(out, "out");
    *out = nullptr;
    Require(dir, "dir");
    auto res = std::make_unique<lrsd_result>();
    res->stored = lrsd::LoadResult(dir);
    *out = res.release();
  });
}

void lrsd_result_free(lrsd_result* res) { delete res; }

lrsd_status lrsd_check(const lrsd_instance* inst, const lrsd_result* res,
                       int rerun, int* passed, char** report_json) {
  return Guard([&] {
    Require(inst, "instance");
    Require(res, "result");
    const lrsd::CheckReport report =
        lrsd::CheckSolution(inst->inst, res->stored, rerun != 0);
    if (passed) *passed = report.passed() ? 1 : 0;
    if (report_json) *report_json = Dup(report.ToJson().dump());
  });
}

lrsd_status lrsd_bench_run(const char* spec_json, int threads, char** csv_out,
                           char** table_out, int64_t* violations,
                           int64_t* failures) {
  return Guard([&] {
    json spec = ParseJson(spec_json);
    if (spec.is_null()) spec = json::object();
    const lrsd::BenchReport report = lrsd::RunBenchmark(spec, threads);
    std::string csv, table;
    if (csv_out) {
      std::ostringstream os;
      lrsd::WriteRecordsCsv(report.records, os);
      csv = os.str();
    }
    if (table_out) {
      std::ostringstream os;
      lrsd::WriteSummaryTable(report.groups, os);
      table = os.str();
    }
    if (violations) *violations = static_cast<int64_t>(report.violation_count());
    if (failures) *failures = static_cast<int64_t>(report.failure_count());
    if (csv_out) *csv_out = Dup(csv);
    if (table_out) *table_out = Dup(table);
  });
}

lrsd_status lrsd_export_pgm(const char* matrix_path, const char* pgm_path,
                            int64_t height, int64_t width, int64_t frame) {
  return Guard([&] {
    Require(matrix_path, "matrix_path");
    Require(pgm_path, "pgm_path");
    lrsd::ExportPgm(lrsd::ReadMatrix(matrix_path), pgm_path, height, width,
                    frame);
  });
}

}  // extern "C"
