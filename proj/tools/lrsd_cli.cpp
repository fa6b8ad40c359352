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

// lrsd command-line front end. Talks to the library only through lrsd.h.
//
// Exit codes: 0 success, 1 a check failed or a bench bound was violated,
// 2 usage error, 3 library error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lrsd.h"

namespace {

using nlohmann::json;

constexpr int kExitFailedCheck = 1;
constexpr int kExitUsage = 2;
constexpr int kExitLibrary = 3;

struct LibraryFailure {
  lrsd_status status;
};

void Check(lrsd_status s) {
  if (s != LRSD_OK) throw LibraryFailure{s};
}

// Owns a string returned by the library.
class LibString {
 public:
  ~LibString() { lrsd_string_free(p_); }
  char** out() { return &p_; }
  std::string str() const { return p_ ? p_ : ""; }

 private:
  char* p_ = nullptr;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw CLI::ValidationError("cannot write " + path);
}

// "a.b=3" -> {"a": {"b": 3}}; the value is parsed as JSON when possible.
void ApplySetting(json& cfg, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0)
    throw CLI::ValidationError("--set expects key=value, got '" + kv + "'");
  const std::string key = kv.substr(0, eq);
  const std::string raw = kv.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  cfg[json::json_pointer("/" + std::regex_replace(key, std::regex("\\."), "/"))] =
      value;
}

struct GenerateOpts {
  std::string kind = "rpcp_missing";
  std::int64_t n = 0, rows = 0, cols = 0;
  double rank_ratio = 0.05, sparsity_ratio = 0.05, sample_ratio = 1.0;
  std::string snr_db = "inf";
  std::string delta_rule = "dimension";
  std::uint64_t seed = 0;
  std::string out;
};

int RunGenerate(const GenerateOpts& o) {
  json spec;
  spec["kind"] = o.kind;
  if (o.n > 0) {
    spec["n"] = o.n;
  } else {
    if (o.rows <= 0 || o.cols <= 0)
      throw CLI::ValidationError("give --n or both --rows and --cols");
    spec["rows"] = o.rows;
    spec["cols"] = o.cols;
  }
  spec["rank_ratio"] = o.rank_ratio;
  spec["sparsity_ratio"] = o.sparsity_ratio;
  spec["sample_ratio"] = o.sample_ratio;
  spec["snr_db"] = o.snr_db == "inf" ? json("inf") : json(std::stod(o.snr_db));
  spec["delta_rule"] = o.delta_rule;
  spec["seed"] = o.seed;

  lrsd_instance* inst = nullptr;
  Check(lrsd_instance_generate(spec.dump().c_str(), &inst));
  std::unique_ptr<lrsd_instance, void (*)(lrsd_instance*)> guard(
      inst, lrsd_instance_free);
  Check(lrsd_instance_save(inst, o.out.c_str()));
  LibString info;
  Check(lrsd_instance_info(inst, info.out()));
  std::cout << json::parse(info.str()).dump(2) << "\n";
  return 0;
}

struct SolveOpts {
  std::string solver, config, instance, out;
  std::vector<std::string> settings;
  bool postprocess = false;
};

int RunSolve(const SolveOpts& o) {
  json cfg = o.config.empty() ? json::object() : json::parse(ReadFile(o.config));
  if (!cfg.is_object()) throw CLI::ValidationError("config must be a JSON object");
  for (const auto& kv : o.settings) ApplySetting(cfg, kv);
  if (o.postprocess) cfg["postprocess"] = true;

  lrsd_instance* inst = nullptr;
  Check(lrsd_instance_load(o.instance.c_str(), &inst));
  std::unique_ptr<lrsd_instance, void (*)(lrsd_instance*)> ig(
      inst, lrsd_instance_free);
  lrsd_result* res = nullptr;
  Check(lrsd_solve(inst, o.solver.c_str(), cfg.dump().c_str(), &res));
  std::unique_ptr<lrsd_result, void (*)(lrsd_result*)> rg(res, lrsd_result_free);
  if (!o.out.empty()) Check(lrsd_result_save(res, o.out.c_str()));
  LibString summary;
  Check(lrsd_result_summary(res, summary.out()));
  json s = json::parse(summary.str());
  s.erase("config");
  std::cout << s.dump(2) << "\n";
  return 0;
}

struct BenchOpts {
  std::string spec, csv, table;
  int threads = 0;
};

int RunBench(const BenchOpts& o) {
  LibString csv, table;
  std::int64_t violations = 0, failures = 0;
  Check(lrsd_bench_run(ReadFile(o.spec).c_str(), o.threads, csv.out(),
                       table.out(), &violations, &failures));
  if (!o.csv.empty()) WriteFile(o.csv, csv.str());
  if (!o.table.empty()) WriteFile(o.table, table.str());
  std::cout << table.str();
  if (failures) std::cerr << failures << " cell(s) failed\n";
  if (violations) {
    std::cerr << violations << " acceptance bound violation(s)\n";
    return kExitFailedCheck;
  }
  return 0;
}

struct CheckOpts {
  std::string instance, result;
  bool no_rerun = false;
};

int RunCheck(const CheckOpts& o) {
  lrsd_instance* inst = nullptr;
  Check(lrsd_instance_load(o.instance.c_str(), &inst));
  std::unique_ptr<lrsd_instance, void (*)(lrsd_instance*)> ig(
      inst, lrsd_instance_free);
  lrsd_result* res = nullptr;
  Check(lrsd_result_load(o.result.c_str(), &res));
  std::unique_ptr<lrsd_result, void (*)(lrsd_result*)> rg(res, lrsd_result_free);
  int passed = 0;
  LibString report;
  Check(lrsd_check(inst, res, o.no_rerun ? 0 : 1, &passed, report.out()));
  const json r = json::parse(report.str());
  for (const auto& item : r.at("checks")) {
    std::cout << (item.at("passed").get<bool>() ? "ok    " : "FAIL  ")
              << item.at("name").get<std::string>() << "  "
              << item.at("value").dump() << " <= " << item.at("limit").dump()
              << "\n";
  }
  std::cout << (passed ? "check passed" : "check FAILED") << "\n";
  return passed ? 0 : kExitFailedCheck;
}

struct ExportOpts {
  std::string matrix, out;
  std::int64_t height = 0, width = 0, frame = 0;
};

int RunExport(const ExportOpts& o) {
  Check(lrsd_export_pgm(o.matrix.c_str(), o.out.c_str(), o.height, o.width,
                        o.frame));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank + sparse matrix decomposition"};
  app.set_version_flag("--version", std::string(lrsd_version()));
  app.require_subcommand(1);

  GenerateOpts gen;
  auto* g = app.add_subcommand("generate", "Generate a synthetic instance");
  g->add_option("--kind", gen.kind, "rpcp_missing or spcp")
      ->check(CLI::IsMember({"rpcp_missing", "spcp"}));
  g->add_option("--n", gen.n, "Square size");
  g->add_option("--rows", gen.rows);
  g->add_option("--cols", gen.cols);
  g->add_option("--rank-ratio", gen.rank_ratio, "c_r");
  g->add_option("--sparsity-ratio", gen.sparsity_ratio, "c_p");
  g->add_option("--sample-ratio", gen.sample_ratio, "Fraction observed");
  g->add_option("--snr-db", gen.snr_db, "SNR in dB, or inf");
  g->add_option("--delta-rule", gen.delta_rule)
      ->check(CLI::IsMember({"dimension", "entrywise"}));
  g->add_option("--seed", gen.seed);
  g->add_option("--out", gen.out, "Instance directory")->required();

  SolveOpts sol;
  auto* s = app.add_subcommand("solve", "Solve an instance");
  s->add_option("--solver", sol.solver)
      ->required()
      ->check(CLI::IsMember({"iadm", "eadm", "alm", "pspg"}));
  s->add_option("--config", sol.config, "JSON config file");
  s->add_option("--set", sol.settings, "Override a config key: key=value");
  s->add_flag("--postprocess", sol.postprocess, "l1 post-processing of S");
  s->add_option("--instance", sol.instance)->required();
  s->add_option("--out", sol.out, "Result directory");

  BenchOpts bench;
  auto* b = app.add_subcommand("bench", "Run a benchmark spec");
  b->add_option("spec", bench.spec, "Bench spec (JSON)")->required();
  b->add_option("--threads", bench.threads, "Worker threads (0: all cores)");
  b->add_option("--csv", bench.csv, "Write per-run CSV here");
  b->add_option("--table", bench.table, "Write the summary table here");

  CheckOpts chk;
  auto* c = app.add_subcommand("check", "Verify a stored solution");
  c->add_option("--instance", chk.instance)->required();
  c->add_option("--result", chk.result)->required();
  c->add_flag("--no-rerun", chk.no_rerun, "Skip the verification rerun");

  ExportOpts exp;
  auto* e = app.add_subcommand("export", "Write one column as a PGM frame");
  e->add_option("--matrix", exp.matrix, "LRSD or CSV matrix")->required();
  e->add_option("--out", exp.out)->required();
  e->add_option("--height", exp.height)->required();
  e->add_option("--width", exp.width)->required();
  e->add_option("--frame", exp.frame);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*g) return RunGenerate(gen);
    if (*s) return RunSolve(sol);
    if (*b) return RunBench(bench);
    if (*c) return RunCheck(chk);
    if (*e) return RunExport(exp);
  } catch (const LibraryFailure& f) {
    std::cerr << "error (" << lrsd_status_name(f.status)
              << "): " << lrsd_last_error() << "\n";
    return kExitLibrary;
  } catch (const CLI::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
