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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "lrsd/error.hpp"
#include "lrsd/harness.hpp"

namespace lrsd {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path TempDir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() /
                     ("lrsd_harness_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

StoredResult Solve(const Instance& inst, SolverKind kind, const json& overrides = nullptr) {
  const SolverConfig cfg = ParseSolverConfig(kind, overrides);
  StoredResult s;
  s.result = RunSolver(inst, cfg);
  s.config = SolverConfigToJson(cfg);
  s.instance_id = inst.id;
  s.metrics = ComputeMetrics(s.result.low_rank, s.result.sparse, *inst.truth, inst.mask);
  return s;
}

TEST(ResultIo, RoundTripPreservesMetrics) {
  const fs::path dir = TempDir("result");
  const Instance inst = GenerateRpcpMissing(40, 0.1, 0.05, 1.0, 2);
  const StoredResult a = Solve(inst, SolverKind::kIadm);
  SaveResult(a, dir);
  const StoredResult b = LoadResult(dir);
  EXPECT_EQ(a.result.low_rank, b.result.low_rank);
  EXPECT_EQ(a.result.sparse, b.result.sparse);
  ASSERT_TRUE(b.result.multiplier.has_value());
  EXPECT_EQ(*a.result.multiplier, *b.result.multiplier);
  EXPECT_EQ(a.result.iterations, b.result.iterations);
  EXPECT_EQ(a.result.trace.size(), b.result.trace.size());
  EXPECT_EQ(a.config, b.config);
  const RecoveryMetrics m =
      ComputeMetrics(b.result.low_rank, b.result.sparse, *inst.truth, inst.mask);
  EXPECT_EQ(m.rel_l, a.metrics->rel_l);
  EXPECT_EQ(m.rel_s, a.metrics->rel_s);
  EXPECT_EQ(b.metrics->rel_l, a.metrics->rel_l);

  // Stored instance plus stored result reproduce the metrics exactly.
  SaveInstance(inst, dir / "inst");
  const Instance again = LoadInstance(dir / "inst");
  EXPECT_EQ(ComputeMetrics(b.result.low_rank, b.result.sparse, *again.truth,
                           again.mask).rel_l,
            a.metrics->rel_l);

  fs::remove(dir / "S.lrsd");
  EXPECT_THROW(LoadResult(dir), Error);
  fs::remove_all(dir);
}

TEST(Check, PassesForEverySolver) {
  const Instance full = GenerateRpcpMissing(40, 0.1, 0.05, 1.0, 3);
  for (SolverKind k : {SolverKind::kIadm, SolverKind::kEadm, SolverKind::kAlm,
                       SolverKind::kPspg}) {
    const CheckReport report = CheckSolution(full, Solve(full, k));
    EXPECT_TRUE(report.passed()) << SolverKindName(k) << " " << report.ToJson().dump();
  }
  const Instance noisy = GenerateSpcp(40, 0.1, 0.05, 45.0, 3);
  const CheckReport report = CheckSolution(noisy, Solve(noisy, SolverKind::kPspg));
  EXPECT_TRUE(report.passed()) << report.ToJson().dump();
}

TEST(Check, DetectsTamperedSolution) {
  const Instance inst = GenerateSpcp(30, 0.1, 0.05, 45.0, 4);
  StoredResult s = Solve(inst, SolverKind::kPspg);
  s.result.sparse(0, 0) += 1.0;
  const CheckReport report = CheckSolution(inst, s, false);
  EXPECT_FALSE(report.passed());
}

TEST(Bench, EmptySpecIsEmpty) {
  const BenchReport r = RunBenchmark(json::object());
  EXPECT_TRUE(r.records.empty());
  EXPECT_EQ(r.violation_count(), 0u);
  std::ostringstream csv;
  WriteRecordsCsv(r.records, csv);
  const std::string out = csv.str();
  EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), 1);
}

TEST(Bench, SharedInstanceAndDeterministicOrder) {
  const json spec = {
      {"schema_version", 1},
      {"experiments",
       {{{"name", "small"},
         {"generator", {{"kind", "rpcp_missing"}, {"n", 30}, {"rank_ratio", 0.1}}},
         {"seeds", {1, 2}},
         {"solvers", {{{"solver", "iadm"}}, {{"solver", "alm"}, {"config", {{"eta", 0.5}}}}}},
         {"bounds", {{"mean_rel_l", 1e-2}, {"max_iterations", 1}}}}}}};
  const BenchReport a = RunBenchmark(spec, 4);
  const BenchReport b = RunBenchmark(spec, 1);
  ASSERT_EQ(a.records.size(), 4u);
  EXPECT_EQ(a.records[0].instance_id, a.records[1].instance_id);
  EXPECT_NE(a.records[0].instance_id, a.records[2].instance_id);
  EXPECT_EQ(a.records[0].solver, "iadm");
  EXPECT_EQ(a.records[1].solver, "alm");
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].cell, i);
    EXPECT_EQ(a.records[i].objective, b.records[i].objective);
    EXPECT_TRUE(a.records[i].error.empty());
  }
  ASSERT_EQ(a.groups.size(), 2u);
  // max_iterations = 1 cannot hold.
  EXPECT_GT(a.violation_count(), 0u);

  // Table output depends only on the records.
  std::ostringstream t1, t2;
  std::vector<GroupSummary> g = a.groups;
  for (auto& x : g) x.avg_seconds = x.max_seconds = 0.0;
  WriteSummaryTable(g, t1);
  WriteSummaryTable(g, t2);
  EXPECT_EQ(t1.str(), t2.str());
  EXPECT_NE(t1.str().find("VIOLATED"), std::string::npos);
}

TEST(Bench, CellFailureIsRecorded) {
  const json spec = {
      {"experiments",
       {{{"name", "bad"},
         {"generator", {{"n", 20}, {"sample_ratio", 0.5}}},
         {"solvers", {{{"solver", "iadm"}}}}}}}};
  const BenchReport r = RunBenchmark(spec);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_FALSE(r.records[0].error.empty());
  EXPECT_EQ(r.failure_count(), 1u);
  EXPECT_THROW(RunBenchmark({{"experiments", {{{"generator", {{"n", 5}}}}}}}), InvalidConfig);
}

TEST(Csv, QuotesPerRfc4180) {
  EXPECT_EQ(CsvField("plain"), "plain");
  EXPECT_EQ(CsvField("a,b"), "\"a,b\"");
  EXPECT_EQ(CsvField("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(CsvField("two\nlines"), "\"two\nlines\"");
}

TEST(Pgm, HeaderAndScaling) {
  const fs::path dir = TempDir("pgm");
  fs::create_directories(dir);
  Matrix x(6, 2);
  x.col(0) << 0, 1, 2, 3, 4, 5;
  x.col(1).setConstant(7.0);
  ExportPgm(x, dir / "a.pgm", 2, 3, 0);
  std::ifstream in(dir / "a.pgm", std::ios::binary);
  std::string magic;
  int w = 0, h = 0, maxv = 0;
  in >> magic >> w >> h >> maxv;
  in.get();
  EXPECT_EQ(magic, "P5");
  EXPECT_EQ(w, 3);
  EXPECT_EQ(h, 2);
  EXPECT_EQ(maxv, 255);
  std::string pix(6, '\0');
  in.read(pix.data(), 6);
  // Column-major reshape: row 0 holds entries 0, 2, 4.
  EXPECT_EQ(static_cast<unsigned char>(pix[0]), 0);
  EXPECT_EQ(static_cast<unsigned char>(pix[1]), 102);
  EXPECT_EQ(static_cast<unsigned char>(pix[5]), 255);

  ExportPgm(x, dir / "b.pgm", 2, 3, 1);
  EXPECT_EQ(fs::file_size(dir / "b.pgm"), fs::file_size(dir / "a.pgm"));
  std::ifstream flat(dir / "b.pgm", std::ios::binary);
  std::string all((std::istreambuf_iterator<char>(flat)), {});
  EXPECT_EQ(all.substr(all.size() - 6), std::string(6, '\0'));

  EXPECT_THROW(ExportPgm(x, dir / "c.pgm", 4, 2, 0), DimensionMismatch);
  EXPECT_THROW(ExportPgm(x, dir / "c.pgm", 2, 3, 2), DimensionMismatch);
  fs::remove_all(dir);
}

TEST(Pgm, VideoSmoke) {
  // A tiny "video": 8x8 frames as columns, static background plus sparse
  // foreground. The low-rank and sparse frames must differ.
  GeneratorSpec spec;
  spec.rows = 64;
  spec.cols = 20;
  spec.rank_ratio = 0.05;
  spec.seed = 12;
  const Instance inst = Generate(spec);
  const DecompositionResult r =
      RunSolver(inst, ParseSolverConfig(SolverKind::kIadm, nullptr));
  const fs::path dir = TempDir("video");
  fs::create_directories(dir);
  ExportPgm(r.low_rank, dir / "l.pgm", 8, 8, 3);
  ExportPgm(r.sparse, dir / "s.pgm", 8, 8, 3);
  auto pixel_sum = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::string all((std::istreambuf_iterator<char>(in)), {});
    long sum = 0;
    for (std::size_t i = all.size() - 64; i < all.size(); ++i)
      sum += static_cast<unsigned char>(all[i]);
    return sum;
  };
  EXPECT_NE(pixel_sum(dir / "l.pgm"), pixel_sum(dir / "s.pgm"));
  fs::remove_all(dir);
}

}  // namespace
}  // namespace lrsd
