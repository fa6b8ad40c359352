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

#include "lrsd/problems.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "lrsd/error.hpp"
#include "lrsd/matrix_io.hpp"
#include "lrsd/rng.hpp"
#include "lrsd/smoothing.hpp"

namespace lrsd {

namespace {

using json = nlohmann::json;

void CheckSpec(const GeneratorSpec& spec) {
  if (spec.rows <= 0 || spec.cols <= 0) {
    throw InvalidConfig("generator: dimensions must be positive");
  }
  const double small = static_cast<double>(std::min(spec.rows, spec.cols));
  const double entries = static_cast<double>(spec.rows) * spec.cols;
  if (!(spec.rank_ratio > 0.0 && spec.rank_ratio <= 1.0) ||
      spec.rank_ratio * small < 1.0) {
    throw InvalidConfig("generator: rank ratio must satisfy c_r * n >= 1");
  }
  if (!(spec.sparsity_ratio >= 0.0 && spec.sparsity_ratio < 1.0) ||
      (spec.sparsity_ratio > 0.0 && spec.sparsity_ratio * entries < 1.0)) {
    throw InvalidConfig(
        "generator: sparsity ratio must be 0 or satisfy c_p * n^2 >= 1");
  }
  if (!(spec.sample_ratio > 0.0 && spec.sample_ratio <= 1.0)) {
    throw InvalidConfig("generator: sample ratio must lie in (0, 1]");
  }
  if (std::isnan(spec.snr_db)) {
    throw InvalidConfig("generator: SNR must be a number");
  }
}

// First `count` entries of a uniformly random permutation of [0, total).
std::vector<std::uint64_t> SampleWithoutReplacement(Rng& rng,
                                                    std::uint64_t total,
                                                    std::uint64_t count) {
  std::vector<std::uint64_t> pool(total);
  std::iota(pool.begin(), pool.end(), std::uint64_t{0});
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t j = i + rng.Below(total - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

// L0 = U V^T with Gaussian factors, then the sparse support and values.
GroundTruth DrawLowRankSparse(Rng& rng, const GeneratorSpec& spec) {
  const Index m = spec.rows, n = spec.cols;
  GroundTruth truth;
  truth.rank = RoundCount(spec.rank_ratio * std::min(m, n));
  Matrix u(m, truth.rank), v(n, truth.rank);
  for (Index j = 0; j < truth.rank; ++j)
    for (Index i = 0; i < m; ++i) u(i, j) = rng.Gaussian();
  for (Index j = 0; j < truth.rank; ++j)
    for (Index i = 0; i < n; ++i) v(i, j) = rng.Gaussian();
  truth.low_rank = u * v.transpose();

  const std::uint64_t total = static_cast<std::uint64_t>(m) * n;
  truth.support_size =
      spec.sparsity_ratio > 0.0
          ? RoundCount(spec.sparsity_ratio * static_cast<double>(total))
          : 0;
  truth.sparse = Matrix::Zero(m, n);
  const double amp = std::sqrt(8.0 * truth.rank / std::numbers::pi);
  for (std::uint64_t k : SampleWithoutReplacement(rng, total, truth.support_size)) {
    truth.sparse(static_cast<Index>(k / n), static_cast<Index>(k % n)) =
        rng.Uniform(-amp, amp);
  }
  truth.noise = Matrix::Zero(m, n);
  return truth;
}

std::string Num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

json GeneratorSpecToJson(const GeneratorSpec& s) {
  json j;
  j["kind"] = GeneratorKindName(s.kind);
  j["rows"] = s.rows;
  j["cols"] = s.cols;
  j["rank_ratio"] = s.rank_ratio;
  j["sparsity_ratio"] = s.sparsity_ratio;
  j["sample_ratio"] = s.sample_ratio;
  j["snr_db"] = std::isinf(s.snr_db) ? json("inf") : json(s.snr_db);
  j["delta_rule"] = DeltaRuleName(s.delta_rule);
  j["seed"] = s.seed;
  j["rng"] = Rng::kName;
  return j;
}

GeneratorSpec GeneratorSpecFromJson(const json& j) {
  if (!j.is_object()) throw InvalidConfig("generator spec must be an object");
  GeneratorSpec s;
  try {
    s.kind = ParseGeneratorKind(j.value("kind", std::string("rpcp_missing")));
    if (j.contains("n")) {
      s.rows = s.cols = j.at("n").get<Index>();
    } else {
      s.rows = j.at("rows").get<Index>();
      s.cols = j.at("cols").get<Index>();
    }
    s.rank_ratio = j.value("rank_ratio", s.rank_ratio);
    s.sparsity_ratio = j.value("sparsity_ratio", s.sparsity_ratio);
    s.sample_ratio = j.value("sample_ratio", 1.0);
    if (j.contains("snr_db")) {
      const json& snr = j.at("snr_db");
      if (snr.is_string()) {
        if (snr.get<std::string>() != "inf")
          throw InvalidConfig("snr_db must be a number or \"inf\"");
        s.snr_db = std::numeric_limits<double>::infinity();
      } else {
        s.snr_db = snr.get<double>();
      }
    }
    s.delta_rule =
        ParseDeltaRule(j.value("delta_rule", std::string("dimension")));
    s.seed = j.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("generator spec: ") + e.what());
  }
  return s;
}

Index RoundCount(double value) {
  return std::max<Index>(1, static_cast<Index>(std::llround(value)));
}

void ValidateInstance(const Instance& inst) {
  if (inst.data.rows() <= 0 || inst.data.cols() <= 0) {
    throw InvalidArgument("instance: empty data matrix");
  }
  RequireFinite(inst.data, "instance data");
  if (inst.mask.rows() != inst.rows() || inst.mask.cols() != inst.cols()) {
    throw DimensionMismatch("instance: mask shape differs from data");
  }
  if (!(inst.delta >= 0.0) || !std::isfinite(inst.delta)) {
    throw InvalidArgument("instance: delta must be finite and nonnegative");
  }
  if (!(inst.xi > 0.0) || !std::isfinite(inst.xi)) {
    throw InvalidArgument("instance: xi must be positive");
  }
  if (inst.truth) {
    const auto& t = *inst.truth;
    for (const Matrix* m : {&t.low_rank, &t.sparse, &t.noise}) {
      if (m->rows() != inst.rows() || m->cols() != inst.cols()) {
        throw DimensionMismatch("instance: ground truth shape differs from data");
      }
    }
  }
}

Instance MakeInstance(Matrix data, ObservationMask mask, double delta,
                      std::optional<double> xi) {
  const Index m = data.rows(), n = data.cols();
  Instance inst{std::move(data), std::move(mask), delta,
                xi.value_or(DefaultXi(m, n))};
  ValidateInstance(inst);
  return inst;
}

Instance GenerateRpcpMissing(const GeneratorSpec& in) {
  GeneratorSpec spec = in;
  spec.kind = GeneratorKind::kRpcpMissing;
  spec.snr_db = std::numeric_limits<double>::infinity();
  CheckSpec(spec);
  Rng rng(spec.seed);
  GroundTruth truth = DrawLowRankSparse(rng, spec);
  Matrix data = truth.low_rank + truth.sparse;

  const std::uint64_t total = static_cast<std::uint64_t>(spec.rows) * spec.cols;
  std::optional<ObservationMask> mask;
  if (spec.sample_ratio >= 1.0) {
    mask = ObservationMask::Full(spec.rows, spec.cols);
  } else {
    const auto count = static_cast<std::uint64_t>(
        std::min<Index>(RoundCount(spec.sample_ratio * total), total));
    std::vector<ObservationMask::Entry> entries;
    entries.reserve(count);
    for (std::uint64_t k : SampleWithoutReplacement(rng, total, count)) {
      entries.push_back({static_cast<Index>(k / spec.cols),
                         static_cast<Index>(k % spec.cols)});
    }
    mask = ObservationMask::FromEntries(spec.rows, spec.cols, std::move(entries));
  }

  Instance inst{std::move(data), std::move(*mask), 0.0,
                DefaultXi(spec.rows, spec.cols)};
  inst.truth = std::move(truth);
  inst.generator = spec;
  inst.id = InstanceId(spec);
  return inst;
}

Instance GenerateRpcpMissing(Index n, double c_r, double c_p,
                             double sample_ratio, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.rows = spec.cols = n;
  spec.rank_ratio = c_r;
  spec.sparsity_ratio = c_p;
  spec.sample_ratio = sample_ratio;
  spec.seed = seed;
  return GenerateRpcpMissing(spec);
}

double RhoFromSnr(Index n, double c_r, double c_p, double snr_db) {
  const double r = static_cast<double>(RoundCount(c_r * n));
  const double signal = c_r * n + c_p * 8.0 * r / (3.0 * std::numbers::pi);
  return std::sqrt(signal / std::pow(10.0, snr_db / 10.0));
}

double SnrFromRho(Index n, double c_r, double c_p, double rho) {
  const double r = static_cast<double>(RoundCount(c_r * n));
  const double signal = c_r * n + c_p * 8.0 * r / (3.0 * std::numbers::pi);
  return 10.0 * std::log10(signal / (rho * rho));
}

double DeltaFromRho(Index rows, Index cols, double rho, DeltaRule rule) {
  const double n = rule == DeltaRule::kDimension
                       ? static_cast<double>(std::max(rows, cols))
                       : static_cast<double>(rows) * static_cast<double>(cols);
  return std::sqrt(n + std::sqrt(8.0 * n)) * rho;
}

Instance GenerateSpcp(const GeneratorSpec& in) {
  GeneratorSpec spec = in;
  spec.kind = GeneratorKind::kSpcp;
  spec.sample_ratio = 1.0;
  CheckSpec(spec);
  Rng rng(spec.seed);
  GroundTruth truth = DrawLowRankSparse(rng, spec);
  const Index n = std::min(spec.rows, spec.cols);
  double rho = 0.0;
  if (std::isfinite(spec.snr_db)) {
    rho = RhoFromSnr(n, spec.rank_ratio, spec.sparsity_ratio, spec.snr_db);
    for (Index i = 0; i < spec.rows; ++i)
      for (Index j = 0; j < spec.cols; ++j) truth.noise(i, j) = rho * rng.Gaussian();
  } else if (spec.snr_db < 0) {
    throw InvalidConfig("generator: SNR of -inf is not meaningful");
  }
  Matrix data = truth.low_rank + truth.sparse + truth.noise;
  const double delta = DeltaFromRho(spec.rows, spec.cols, rho, spec.delta_rule);
  Instance inst{std::move(data), ObservationMask::Full(spec.rows, spec.cols),
                delta, DefaultXi(spec.rows, spec.cols)};
  inst.noise_level = rho;
  inst.truth = std::move(truth);
  inst.generator = spec;
  inst.id = InstanceId(spec);
  return inst;
}

Instance GenerateSpcp(Index n, double c_r, double c_p, double snr_db,
                      std::uint64_t seed) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::kSpcp;
  spec.rows = spec.cols = n;
  spec.rank_ratio = c_r;
  spec.sparsity_ratio = c_p;
  spec.snr_db = snr_db;
  spec.seed = seed;
  return GenerateSpcp(spec);
}

Instance Generate(const GeneratorSpec& spec) {
  return spec.kind == GeneratorKind::kSpcp ? GenerateSpcp(spec)
                                           : GenerateRpcpMissing(spec);
}

std::string InstanceId(const GeneratorSpec& s) {
  std::string id = std::string(GeneratorKindName(s.kind)) + "-" +
                   std::to_string(s.rows) + "x" + std::to_string(s.cols) +
                   "-cr" + Num(s.rank_ratio) + "-cp" + Num(s.sparsity_ratio);
  if (s.kind == GeneratorKind::kRpcpMissing) {
    id += "-sr" + Num(s.sample_ratio);
  } else {
    id += "-snr" + (std::isinf(s.snr_db) ? std::string("inf") : Num(s.snr_db));
    if (s.delta_rule != DeltaRule::kDimension) id += "-" + std::string(DeltaRuleName(s.delta_rule));
  }
  return id + "-s" + std::to_string(s.seed);
}

const char* GeneratorKindName(GeneratorKind kind) {
  return kind == GeneratorKind::kSpcp ? "spcp" : "rpcp_missing";
}

GeneratorKind ParseGeneratorKind(const std::string& name) {
  if (name == "spcp") return GeneratorKind::kSpcp;
  if (name == "rpcp_missing" || name == "rpcp") return GeneratorKind::kRpcpMissing;
  throw InvalidConfig("unknown generator kind '" + name + "'");
}

const char* DeltaRuleName(DeltaRule rule) {
  return rule == DeltaRule::kEntrywise ? "entrywise" : "dimension";
}

DeltaRule ParseDeltaRule(const std::string& name) {
  if (name == "dimension") return DeltaRule::kDimension;
  if (name == "entrywise") return DeltaRule::kEntrywise;
  throw InvalidConfig("unknown delta rule '" + name + "'");
}

void SaveInstance(const Instance& inst, const std::filesystem::path& dir) {
  ValidateInstance(inst);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  json manifest;
  manifest["format"] = "lrsd-instance";
  manifest["format_version"] = kInstanceFormatVersion;
  manifest["id"] = inst.id;
  manifest["rows"] = inst.rows();
  manifest["cols"] = inst.cols();
  manifest["xi"] = inst.xi;
  manifest["delta"] = inst.delta;
  manifest["noise_level"] =
      inst.noise_level ? json(*inst.noise_level) : json(nullptr);
  manifest["observed"] = inst.mask.size();
  manifest["generator"] =
      inst.generator ? GeneratorSpecToJson(*inst.generator) : json(nullptr);
  if (inst.truth) {
    manifest["ground_truth"] = {{"rank", inst.truth->rank},
                                {"support_size", inst.truth->support_size}};
  } else {
    manifest["ground_truth"] = nullptr;
  }

  WriteLrsd(dir / "D.lrsd", inst.data);
  WriteMask(dir / "mask.csv", inst.mask);
  if (inst.truth) {
    WriteLrsd(dir / "L0.lrsd", inst.truth->low_rank);
    WriteLrsd(dir / "S0.lrsd", inst.truth->sparse);
    WriteLrsd(dir / "N0.lrsd", inst.truth->noise);
  }
  // Manifest last, so a directory with a manifest is complete.
  std::ofstream out(dir / "manifest.json");
  out << manifest.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + (dir / "manifest.json").string());
}

Instance LoadInstance(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw IoError("cannot open " + (dir / "manifest.json").string());
  json manifest;
  try {
    manifest = json::parse(in);
    if (manifest.at("format").get<std::string>() != "lrsd-instance") {
      throw FormatError("not an lrsd instance manifest");
    }
    if (manifest.at("format_version").get<int>() != kInstanceFormatVersion) {
      throw FormatError("unsupported instance format version");
    }
    const Index rows = manifest.at("rows").get<Index>();
    const Index cols = manifest.at("cols").get<Index>();
    Matrix data = ReadLrsd(dir / "D.lrsd");
    if (data.rows() != rows || data.cols() != cols) {
      throw FormatError("D.lrsd shape disagrees with manifest");
    }
    Instance inst{std::move(data), ReadMask(dir / "mask.csv", rows, cols),
                  manifest.at("delta").get<double>(),
                  manifest.at("xi").get<double>()};
    inst.id = manifest.value("id", std::string());
    if (!manifest.at("noise_level").is_null()) {
      inst.noise_level = manifest["noise_level"].get<double>();
    }
    if (!manifest.at("generator").is_null()) {
      inst.generator = GeneratorSpecFromJson(manifest["generator"]);
    }
    if (!manifest.at("ground_truth").is_null()) {
      GroundTruth t;
      t.rank = manifest["ground_truth"].at("rank").get<Index>();
      t.support_size = manifest["ground_truth"].at("support_size").get<Index>();
      t.low_rank = ReadLrsd(dir / "L0.lrsd");
      t.sparse = ReadLrsd(dir / "S0.lrsd");
      t.noise = ReadLrsd(dir / "N0.lrsd");
      inst.truth = std::move(t);
    }
    ValidateInstance(inst);
    return inst;
  } catch (const json::exception& e) {
    throw FormatError(dir.string() + ": bad manifest: " + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(dir.string() + ": " + e.what());
  } catch (const DimensionMismatch& e) {
    throw FormatError(dir.string() + ": " + e.what());
  }
}

}  // namespace lrsd
