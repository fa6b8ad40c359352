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

#include "lrsd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "lrsd/error.hpp"
#include "lrsd/matrix_io.hpp"
#include "lrsd/solver_common.hpp"

namespace lrsd {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json NumberOrNull(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double NumberOr(const json& j, const char* key, double fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<double>();
}

}  // namespace

// ---- Result container -----------------------------------------------------

json ResultSummaryJson(const DecompositionResult& r) {
  json j;
  j["solver"] = r.solver;
  j["iterations"] = r.iterations;
  j["svd_count"] = r.svd.svd_count;
  j["lsv_count"] = r.svd.lsv_count;
  j["converged"] = r.converged;
  j["objective"] = r.objective;
  j["infeasibility"] = r.infeasibility;
  j["relative_infeasibility"] = r.relative_infeasibility;
  j["rank"] = r.rank;
  j["wall_seconds"] = r.wall_seconds;
  j["max_subproblem_residual"] = NumberOrNull(r.max_subproblem_residual);
  j["monotonicity_warnings"] = r.monotonicity_warnings;
  return j;
}

void SaveResult(const StoredResult& stored, const fs::path& dir) {
  const DecompositionResult& r = stored.result;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  WriteLrsd(dir / "L.lrsd", r.low_rank);
  WriteLrsd(dir / "S.lrsd", r.sparse);
  if (r.multiplier) WriteLrsd(dir / "Lambda.lrsd", *r.multiplier);

  json j = ResultSummaryJson(r);
  j["format"] = "lrsd-result";
  j["format_version"] = kResultFormatVersion;
  j["instance_id"] = stored.instance_id;
  j["config"] = stored.config;
  j["rows"] = r.low_rank.rows();
  j["cols"] = r.low_rank.cols();
  if (stored.metrics) {
    j["metrics"] = {{"rel_l", stored.metrics->rel_l},
                    {"rel_s", stored.metrics->rel_s},
                    {"rel_l_absolute", stored.metrics->l_absolute},
                    {"rel_s_absolute", stored.metrics->s_absolute}};
  }
  json trace = json::array();
  for (const auto& t : r.trace)
    trace.push_back({t.rho, t.infeasibility, t.change, t.rank});
  j["trace"] = std::move(trace);
  j["trace_columns"] = {"rho", "infeasibility", "change", "rank"};

  std::ofstream out(dir / "result.json");
  out << std::setprecision(17) << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + (dir / "result.json").string());
}

StoredResult LoadResult(const fs::path& dir) {
  std::ifstream in(dir / "result.json");
  if (!in) throw IoError("cannot open " + (dir / "result.json").string());
  StoredResult stored;
  try {
    const json j = json::parse(in);
    if (j.value("format", std::string()) != "lrsd-result")
      throw FormatError("result.json is not an lrsd result");
    const int version = j.at("format_version").get<int>();
    if (version != kResultFormatVersion)
      throw FormatError("unsupported result format_version " +
                        std::to_string(version));
    DecompositionResult& r = stored.result;
    r.solver = j.at("solver").get<std::string>();
    r.iterations = j.at("iterations").get<std::int64_t>();
    r.svd.svd_count = j.at("svd_count").get<std::int64_t>();
    r.svd.lsv_count = j.at("lsv_count").get<std::int64_t>();
    r.converged = j.at("converged").get<bool>();
    r.objective = j.at("objective").get<double>();
    r.infeasibility = j.at("infeasibility").get<double>();
    r.relative_infeasibility = j.at("relative_infeasibility").get<double>();
    r.rank = j.at("rank").get<Index>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    r.max_subproblem_residual =
        NumberOr(j, "max_subproblem_residual",
                 std::numeric_limits<double>::quiet_NaN());
    r.monotonicity_warnings = j.value("monotonicity_warnings", std::int64_t{0});
    for (const auto& t : j.value("trace", json::array()))
      r.trace.push_back({t.at(0).get<double>(), t.at(1).get<double>(),
                         t.at(2).get<double>(), t.at(3).get<Index>()});
    stored.config = j.value("config", json(nullptr));
    stored.instance_id = j.value("instance_id", std::string());
    if (j.contains("metrics")) {
      const json& m = j.at("metrics");
      stored.metrics = RecoveryMetrics{m.at("rel_l").get<double>(),
                                       m.at("rel_s").get<double>(),
                                       m.value("rel_l_absolute", false),
                                       m.value("rel_s_absolute", false)};
    }
    const Index rows = j.at("rows").get<Index>();
    const Index cols = j.at("cols").get<Index>();
    r.low_rank = ReadLrsd(dir / "L.lrsd");
    r.sparse = ReadLrsd(dir / "S.lrsd");
    if (fs::exists(dir / "Lambda.lrsd")) r.multiplier = ReadLrsd(dir / "Lambda.lrsd");
    if (r.low_rank.rows() != rows || r.low_rank.cols() != cols ||
        r.sparse.rows() != rows || r.sparse.cols() != cols)
      throw FormatError("result matrices disagree with result.json");
  } catch (const json::exception& e) {
    throw FormatError(std::string("result.json: ") + e.what());
  }
  return stored;
}

// ---- Verification ---------------------------------------------------------

bool CheckReport::passed() const {
  return std::all_of(items.begin(), items.end(),
                     [](const CheckItem& i) { return i.passed; });
}

json CheckReport::ToJson() const {
  json j;
  j["passed"] = passed();
  json arr = json::array();
  for (const auto& i : items)
    arr.push_back({{"name", i.name},
                   {"value", NumberOrNull(i.value)},
                   {"limit", NumberOrNull(i.limit)},
                   {"passed", i.passed}});
  j["checks"] = std::move(arr);
  return j;
}

namespace {

void Add(CheckReport& report, std::string name, double value, double limit) {
  report.items.push_back({std::move(name), value, limit,
                          std::isfinite(value) && value <= limit});
}

double RelDiff(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

}  // namespace

CheckReport CheckSolution(const Instance& instance, const StoredResult& stored,
                          bool rerun) {
  ValidateInstance(instance);
  const DecompositionResult& r = stored.result;
  if (r.low_rank.rows() != instance.rows() ||
      r.low_rank.cols() != instance.cols())
    throw DimensionMismatch("result shape differs from instance");
  const SolverKind kind = ParseSolverKind(r.solver);
  const SolverConfig cfg = ParseSolverConfig(kind, stored.config);

  DecompositionResult again;
  again.low_rank = r.low_rank;
  again.sparse = r.sparse;
  FinalizeResult(instance, again);

  CheckReport report;
  Add(report, "objective_recomputed", RelDiff(again.objective, r.objective), 1e-9);
  Add(report, "infeasibility_recomputed",
      RelDiff(again.relative_infeasibility, r.relative_infeasibility), 1e-9);
  Add(report, "converged", r.converged ? 0.0 : 1.0, 0.0);

  const Matrix observed = instance.ObservedData();
  switch (kind) {
    case SolverKind::kIadm:
    case SolverKind::kEadm:
      Add(report, "termination_rule", again.relative_infeasibility,
          cfg.admm.rel_infeas_tol);
      break;
    case SolverKind::kAlm:
      Add(report, "termination_rule", again.relative_infeasibility,
          cfg.alm.rel_infeas_tol);
      break;
    case SolverKind::kPspg: {
      // Every iterate stays in the constraint set.
      const double gap = (r.low_rank + r.sparse - observed).norm();
      const double limit = instance.delta > 0.0
                               ? instance.delta * (1.0 + 1e-9)
                               : 1e-12 * std::max(1.0, observed.norm());
      Add(report, "constraint_feasibility", gap, limit);
      break;
    }
  }

  if (rerun) {
    SolverConfig verify = cfg;
    verify.postprocess = false;
    EnableVerification(verify);
    const DecompositionResult v = RunSolver(instance, verify);
    if (kind == SolverKind::kAlm || kind == SolverKind::kPspg) {
      Add(report, "subproblem_residual", v.max_subproblem_residual, 1e-8);
    }
    if (!cfg.postprocess) {
      const double scale = std::max(1.0, r.low_rank.norm());
      Add(report, "rerun_reproduces_low_rank",
          (v.low_rank - r.low_rank).norm() / scale, 1e-9);
    }
    if (kind == SolverKind::kAlm) {
      report.items.push_back({"monotonicity_warnings",
                              static_cast<double>(v.monotonicity_warnings),
                              std::numeric_limits<double>::infinity(), true});
    }
  }
  return report;
}

// ---- Benchmarks -----------------------------------------------------------

std::size_t BenchReport::violation_count() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.violations.size();
  return n;
}

std::size_t BenchReport::failure_count() const {
  return std::count_if(records.begin(), records.end(),
                       [](const RunRecord& r) { return !r.error.empty(); });
}

namespace {

struct Cell {
  std::string experiment;
  GeneratorSpec generator;
  SolverConfig config;
};

struct ExperimentPlan {
  std::string name;
  std::vector<std::string> solvers;
  Bounds bounds;
};

Bounds ParseBounds(const json& j) {
  Bounds b;
  if (j.is_null()) return b;
  if (!j.is_object()) throw InvalidConfig("bounds must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "mean_rel_l")
      b.mean_rel_l = it->get<double>();
    else if (k == "mean_rel_s")
      b.mean_rel_s = it->get<double>();
    else if (k == "max_svd")
      b.max_svd = it->get<std::int64_t>();
    else if (k == "min_iterations")
      b.min_iterations = it->get<std::int64_t>();
    else if (k == "max_iterations")
      b.max_iterations = it->get<std::int64_t>();
    else
      throw InvalidConfig("unknown bound '" + k + "'");
  }
  return b;
}

RunRecord RunCell(std::size_t index, const Cell& cell) {
  RunRecord rec;
  rec.cell = index;
  rec.experiment = cell.experiment;
  rec.seed = cell.generator.seed;
  rec.instance_id = InstanceId(cell.generator);
  rec.solver = SolverKindName(cell.config.kind);
  rec.config = SolverConfigToJson(cell.config);
  try {
    const Instance inst = Generate(cell.generator);
    const DecompositionResult r = RunSolver(inst, cell.config);
    rec.iterations = r.iterations;
    rec.svd_count = r.svd.svd_count;
    rec.lsv_count = r.svd.lsv_count;
    rec.wall_seconds = r.wall_seconds;
    rec.objective = r.objective;
    rec.infeasibility = r.relative_infeasibility;
    rec.rank = r.rank;
    rec.converged = r.converged;
    if (inst.truth) {
      const RecoveryMetrics m =
          ComputeMetrics(r.low_rank, r.sparse, *inst.truth, inst.mask);
      rec.rel_l = m.rel_l;
      rec.rel_s = m.rel_s;
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
    if (rec.error.empty()) rec.error = "unknown failure";
  }
  return rec;
}

GroupSummary Summarize(const std::string& experiment, const std::string& solver,
                       const std::vector<const RunRecord*>& recs,
                       const Bounds& bounds) {
  GroupSummary g;
  g.experiment = experiment;
  g.solver = solver;
  std::size_t ok = 0, with_metrics = 0;
  for (const RunRecord* r : recs) {
    ++g.runs;
    if (!r->error.empty()) {
      ++g.failures;
      continue;
    }
    ++ok;
    g.avg_iterations += r->iterations;
    g.max_iterations = std::max(g.max_iterations, double(r->iterations));
    g.avg_svd += r->svd_count;
    g.max_svd = std::max(g.max_svd, double(r->svd_count));
    g.avg_lsv += r->lsv_count;
    g.max_lsv = std::max(g.max_lsv, double(r->lsv_count));
    g.avg_seconds += r->wall_seconds;
    g.max_seconds = std::max(g.max_seconds, r->wall_seconds);
    if (r->rel_l && r->rel_s) {
      ++with_metrics;
      g.avg_rel_l += *r->rel_l;
      g.max_rel_l = std::max(g.max_rel_l, *r->rel_l);
      g.avg_rel_s += *r->rel_s;
      g.max_rel_s = std::max(g.max_rel_s, *r->rel_s);
    }
  }
  if (ok) {
    g.avg_iterations /= ok;
    g.avg_svd /= ok;
    g.avg_lsv /= ok;
    g.avg_seconds /= ok;
  }
  g.has_metrics = with_metrics > 0;
  if (with_metrics) {
    g.avg_rel_l /= with_metrics;
    g.avg_rel_s /= with_metrics;
  }

  auto violate = [&](const std::string& what) { g.violations.push_back(what); };
  auto fmt = [](double v) {
    std::ostringstream os;
    os << std::setprecision(3) << v;
    return os.str();
  };
  const bool any_bound = bounds.mean_rel_l || bounds.mean_rel_s ||
                         bounds.max_svd || bounds.min_iterations ||
                         bounds.max_iterations;
  if (any_bound && g.failures) violate(std::to_string(g.failures) + " failed runs");
  if (bounds.mean_rel_l && (!g.has_metrics || !(g.avg_rel_l <= *bounds.mean_rel_l)))
    violate("mean relL " + fmt(g.avg_rel_l) + " > " + fmt(*bounds.mean_rel_l));
  if (bounds.mean_rel_s && (!g.has_metrics || !(g.avg_rel_s <= *bounds.mean_rel_s)))
    violate("mean relS " + fmt(g.avg_rel_s) + " > " + fmt(*bounds.mean_rel_s));
  for (const RunRecord* r : recs) {
    if (!r->error.empty()) continue;
    const std::string tag = " (seed " + std::to_string(r->seed) + ")";
    if (bounds.max_svd && r->svd_count > *bounds.max_svd)
      violate("svd " + std::to_string(r->svd_count) + " > " +
              std::to_string(*bounds.max_svd) + tag);
    if (bounds.min_iterations && r->iterations < *bounds.min_iterations)
      violate("iterations " + std::to_string(r->iterations) + " < " +
              std::to_string(*bounds.min_iterations) + tag);
    if (bounds.max_iterations && r->iterations > *bounds.max_iterations)
      violate("iterations " + std::to_string(r->iterations) + " > " +
              std::to_string(*bounds.max_iterations) + tag);
  }
  return g;
}

}  // namespace

BenchReport RunBenchmark(const json& spec, int threads) {
  if (!spec.is_object()) throw InvalidConfig("bench spec must be an object");
  const int version = spec.value("schema_version", kConfigSchemaVersion);
  if (version != kConfigSchemaVersion)
    throw InvalidConfig("unsupported bench schema_version " +
                        std::to_string(version));

  std::vector<Cell> cells;
  std::vector<ExperimentPlan> plans;
  try {
    for (const json& e : spec.value("experiments", json::array())) {
      ExperimentPlan plan;
      plan.name = e.value("name", "experiment-" + std::to_string(plans.size()));
      plan.bounds = ParseBounds(e.value("bounds", json(nullptr)));
      const GeneratorSpec base = GeneratorSpecFromJson(e.at("generator"));
      std::vector<std::uint64_t> seeds;
      if (e.contains("seeds"))
        seeds = e.at("seeds").get<std::vector<std::uint64_t>>();
      else
        seeds.push_back(base.seed);
      std::vector<SolverConfig> configs;
      for (const json& s : e.at("solvers")) {
        const SolverKind kind = ParseSolverKind(s.at("solver").get<std::string>());
        configs.push_back(ParseSolverConfig(kind, s.value("config", json(nullptr))));
        plan.solvers.push_back(SolverKindName(kind));
      }
      for (std::uint64_t seed : seeds) {
        for (const SolverConfig& c : configs) {
          Cell cell{plan.name, base, c};
          cell.generator.seed = seed;
          cells.push_back(std::move(cell));
        }
      }
      plans.push_back(std::move(plan));
    }
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("bench spec: ") + e.what());
  }

  BenchReport report;
  report.records.resize(cells.size());
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, std::max<std::size_t>(1, cells.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++)
      report.records[i] = RunCell(i, cells[i]);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  for (const ExperimentPlan& plan : plans) {
    std::vector<std::string> seen;
    for (const std::string& solver : plan.solvers) {
      if (std::find(seen.begin(), seen.end(), solver) != seen.end()) continue;
      seen.push_back(solver);
      std::vector<const RunRecord*> recs;
      for (const RunRecord& r : report.records)
        if (r.experiment == plan.name && r.solver == solver) recs.push_back(&r);
      report.groups.push_back(Summarize(plan.name, solver, recs, plan.bounds));
    }
  }
  return report;
}

std::string CsvField(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void WriteRecordsCsv(const std::vector<RunRecord>& records, std::ostream& out) {
  out << "cell,experiment,instance_id,seed,solver,config,iterations,svd,lsv,"
         "wall_seconds,objective,infeasibility,relL,relS,rank,converged,error\r\n";
  auto num = [](double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
  };
  for (const RunRecord& r : records) {
    out << r.cell << ',' << CsvField(r.experiment) << ','
        << CsvField(r.instance_id) << ',' << r.seed << ','
        << CsvField(r.solver) << ',' << CsvField(r.config.dump()) << ','
        << r.iterations << ',' << r.svd_count << ',' << r.lsv_count << ','
        << num(r.wall_seconds) << ',' << num(r.objective) << ','
        << num(r.infeasibility) << ',' << (r.rel_l ? num(*r.rel_l) : "") << ','
        << (r.rel_s ? num(*r.rel_s) : "") << ',' << r.rank << ','
        << (r.converged ? "true" : "false") << ',' << CsvField(r.error)
        << "\r\n";
  }
}

void WriteSummaryTable(const std::vector<GroupSummary>& groups,
                       std::ostream& out) {
  const std::vector<std::string> head = {
      "experiment", "solver", "runs", "iter avg/max", "svd avg/max",
      "lsv avg/max", "relL avg/max", "relS avg/max", "sec avg/max", "status"};
  std::vector<std::vector<std::string>> rows;
  auto pair = [](double a, double b, bool sci) {
    std::ostringstream os;
    if (sci)
      os << std::scientific << std::setprecision(1) << a << " / " << b;
    else
      os << std::fixed << std::setprecision(1) << a << " / "
         << std::setprecision(0) << b;
    return os.str();
  };
  for (const auto& g : groups) {
    std::ostringstream sec;
    sec << std::fixed << std::setprecision(2) << g.avg_seconds << " / "
        << g.max_seconds;
    std::string status = g.violations.empty() ? "ok" : "VIOLATED";
    if (g.failures) status += " (" + std::to_string(g.failures) + " failed)";
    rows.push_back({g.experiment, g.solver, std::to_string(g.runs),
                    pair(g.avg_iterations, g.max_iterations, false),
                    pair(g.avg_svd, g.max_svd, false),
                    pair(g.avg_lsv, g.max_lsv, false),
                    g.has_metrics ? pair(g.avg_rel_l, g.max_rel_l, true) : "-",
                    g.has_metrics ? pair(g.avg_rel_s, g.max_rel_s, true) : "-",
                    sec.str(), status});
  }
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out << (c ? "  " : "") << std::left << std::setw(int(width[c])) << cells[c];
    }
    out << "\n";
  };
  line(head);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out << std::string(total + 2 * (width.size() - 1), '-') << "\n";
  for (const auto& r : rows) line(r);
  for (const auto& g : groups)
    for (const auto& v : g.violations)
      out << "violation: " << g.experiment << " / " << g.solver << ": " << v << "\n";
}

// ---- Image export ---------------------------------------------------------

void ExportPgm(const Matrix& x, const fs::path& path, Index height,
               Index width, Index frame) {
  if (height <= 0 || width <= 0)
    throw InvalidArgument("frame shape must be positive");
  if (height * width != x.rows())
    throw DimensionMismatch("height * width must equal the row count");
  if (frame < 0 || frame >= x.cols())
    throw DimensionMismatch("frame index out of range");
  const auto col = x.col(frame);
  const double lo = col.minCoeff();
  const double hi = col.maxCoeff();
  const double span = hi - lo;
  std::string pixels(static_cast<std::size_t>(height * width), '\0');
  for (Index r = 0; r < height; ++r) {
    for (Index c = 0; c < width; ++c) {
      double v = span > 0.0 ? (col(c * height + r) - lo) / span * 255.0 : 0.0;
      pixels[static_cast<std::size_t>(r * width + c)] =
          static_cast<char>(static_cast<unsigned char>(std::lround(v)));
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  out << "P5\n" << width << " " << height << "\n255\n";
  out.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace lrsd
