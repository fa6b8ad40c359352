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

// Exercises the shared library through its C header only.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "json.hpp"
#include "lrsd.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string TakeString(char* s) {
  std::string out = s ? s : "";
  lrsd_string_free(s);
  return out;
}

fs::path TempDir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() /
                     ("lrsd_capi_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STRNE(lrsd_version(), "");
  EXPECT_STREQ(lrsd_status_name(LRSD_OK), "ok");
  EXPECT_STRNE(lrsd_status_name(LRSD_ERR_THETA_SEARCH), "ok");
}

TEST(CApi, GenerateSolveSaveCheck) {
  lrsd_instance* inst = nullptr;
  ASSERT_EQ(lrsd_instance_generate(
                R"({"kind":"rpcp_missing","n":40,"rank_ratio":0.1,"seed":5})", &inst),
            LRSD_OK)
      << lrsd_last_error();
  char* info = nullptr;
  ASSERT_EQ(lrsd_instance_info(inst, &info), LRSD_OK);
  const json ij = json::parse(TakeString(info));
  EXPECT_EQ(ij["rows"], 40);
  EXPECT_EQ(ij["true_rank"], 4);

  lrsd_result* res = nullptr;
  ASSERT_EQ(lrsd_solve(inst, "iadm", nullptr, &res), LRSD_OK) << lrsd_last_error();
  int64_t rows = 0, cols = 0;
  ASSERT_EQ(lrsd_result_dims(res, &rows, &cols), LRSD_OK);
  EXPECT_EQ(rows, 40);
  EXPECT_EQ(cols, 40);
  double rel_l = 1.0, rel_s = 1.0;
  ASSERT_EQ(lrsd_result_metrics(res, &rel_l, &rel_s), LRSD_OK);
  EXPECT_LT(rel_l, 1e-5);
  EXPECT_LT(rel_s, 1e-5);

  std::vector<double> lam(40 * 40);
  EXPECT_EQ(lrsd_result_copy(res, LRSD_MULTIPLIER, lam.data(), lam.size()), LRSD_OK);
  std::vector<double> small(10);
  EXPECT_EQ(lrsd_result_copy(res, LRSD_LOW_RANK, small.data(), small.size()),
            LRSD_ERR_DIMENSION_MISMATCH);
  EXPECT_NE(std::string(lrsd_last_error()).find("need 1600"), std::string::npos);

  const fs::path dir = TempDir("roundtrip");
  ASSERT_EQ(lrsd_result_save(res, dir.c_str()), LRSD_OK) << lrsd_last_error();
  lrsd_result* back = nullptr;
  ASSERT_EQ(lrsd_result_load(dir.c_str(), &back), LRSD_OK) << lrsd_last_error();
  std::vector<double> a(1600), b(1600);
  ASSERT_EQ(lrsd_result_copy(res, LRSD_SPARSE, a.data(), a.size()), LRSD_OK);
  ASSERT_EQ(lrsd_result_copy(back, LRSD_SPARSE, b.data(), b.size()), LRSD_OK);
  EXPECT_EQ(a, b);

  int passed = 0;
  char* report = nullptr;
  ASSERT_EQ(lrsd_check(inst, back, 1, &passed, &report), LRSD_OK) << lrsd_last_error();
  const std::string rep = TakeString(report);
  EXPECT_TRUE(passed) << rep;
  EXPECT_TRUE(json::parse(rep).is_object());

  lrsd_result_free(back);
  lrsd_result_free(res);
  lrsd_instance_free(inst);
  fs::remove_all(dir);
}

TEST(CApi, FromDataRecoversRankOne) {
  // D = u v^T plus one spike. Column-major, like the library.
  const int64_t n = 12;
  std::vector<double> u(n), v(n), d(n * n);
  for (int64_t i = 0; i < n; ++i) {
    u[i] = 1.0 + 0.1 * static_cast<double>(i);
    v[i] = std::cos(0.3 * static_cast<double>(i)) + 1.5;
  }
  for (int64_t j = 0; j < n; ++j)
    for (int64_t i = 0; i < n; ++i) d[j * n + i] = u[i] * v[j];
  d[3 * n + 7] += 5.0;

  lrsd_instance* inst = nullptr;
  ASSERT_EQ(lrsd_instance_from_data(d.data(), n, n, nullptr, nullptr, 0, 0.0, 0.0,
                                    &inst),
            LRSD_OK)
      << lrsd_last_error();
  lrsd_result* res = nullptr;
  ASSERT_EQ(lrsd_solve(inst, "alm", R"({"rel_infeas_tol":1e-9})", &res), LRSD_OK)
      << lrsd_last_error();
  std::vector<double> l(n * n), s(n * n);
  ASSERT_EQ(lrsd_result_copy(res, LRSD_LOW_RANK, l.data(), l.size()), LRSD_OK);
  ASSERT_EQ(lrsd_result_copy(res, LRSD_SPARSE, s.data(), s.size()), LRSD_OK);
  double err = 0.0, ref = 0.0;
  for (int64_t j = 0; j < n; ++j)
    for (int64_t i = 0; i < n; ++i) {
      const double t = u[i] * v[j] - l[j * n + i];
      err += t * t;
      ref += u[i] * v[j] * u[i] * v[j];
    }
  EXPECT_LT(std::sqrt(err / ref), 1e-4);
  EXPECT_NEAR(s[3 * n + 7], 5.0, 1e-3);

  // No ground truth, so no metrics; ALM keeps no multiplier.
  double rl = 0.0;
  EXPECT_EQ(lrsd_result_metrics(res, &rl, nullptr), LRSD_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(lrsd_result_copy(res, LRSD_MULTIPLIER, l.data(), l.size()),
            LRSD_ERR_INVALID_ARGUMENT);
  lrsd_result_free(res);
  lrsd_instance_free(inst);
}

TEST(CApi, ErrorsMapToStatusCodes) {
  lrsd_instance* inst = nullptr;
  EXPECT_EQ(lrsd_instance_generate("{not json", &inst), LRSD_ERR_INVALID_CONFIG);
  EXPECT_EQ(inst, nullptr);
  EXPECT_STRNE(lrsd_last_error(), "");
  EXPECT_EQ(lrsd_instance_generate(R"({"n":-3})", &inst), LRSD_ERR_INVALID_CONFIG);
  EXPECT_EQ(lrsd_instance_generate(nullptr, &inst), LRSD_ERR_INVALID_CONFIG);

  const double d[4] = {1.0, 2.0, 3.0, 4.0};
  const int64_t r[1] = {5}, c[1] = {0};
  EXPECT_EQ(lrsd_instance_from_data(d, 2, 2, r, c, 1, 0.0, 0.0, &inst),
            LRSD_ERR_INVALID_ARGUMENT);
  ASSERT_EQ(lrsd_instance_from_data(d, 2, 2, nullptr, nullptr, 0, 0.0, 0.0, &inst),
            LRSD_OK);
  lrsd_result* res = nullptr;
  EXPECT_EQ(lrsd_solve(inst, "simplex", nullptr, &res), LRSD_ERR_INVALID_CONFIG);
  EXPECT_EQ(lrsd_solve(inst, "alm", R"({"eta":7})", &res), LRSD_ERR_INVALID_CONFIG);
  EXPECT_EQ(lrsd_solve(inst, "alm", R"({"no_such_key":1})", &res),
            LRSD_ERR_INVALID_CONFIG);
  EXPECT_EQ(res, nullptr);
  lrsd_instance_free(inst);

  EXPECT_EQ(lrsd_instance_load("/nonexistent/lrsd", &inst), LRSD_ERR_IO);
  EXPECT_EQ(lrsd_result_load("/nonexistent/lrsd", &res), LRSD_ERR_IO);
  lrsd_instance_free(nullptr);
  lrsd_result_free(nullptr);
}

TEST(CApi, BenchThroughCApi) {
  const char* spec = R"({"schema_version":1,"experiments":[{"name":"t",
      "generator":{"kind":"rpcp_missing","n":40,"rank_ratio":0.1},
      "seeds":[1],"solvers":[{"solver":"iadm"}],
      "bounds":{"mean_rel_l":0.1}}]})";
  char* csv = nullptr;
  char* table = nullptr;
  int64_t violations = -1, failures = -1;
  ASSERT_EQ(lrsd_bench_run(spec, 1, &csv, &table, &violations, &failures), LRSD_OK)
      << lrsd_last_error();
  const std::string c = TakeString(csv);
  const std::string t = TakeString(table);
  EXPECT_EQ(c.rfind("cell,experiment,", 0), 0u);
  EXPECT_NE(t.find("ok"), std::string::npos);
  EXPECT_EQ(violations, 0);
  EXPECT_EQ(failures, 0);
}

}  // namespace
