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

#include "lrsd/matrix_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "lrsd/error.hpp"

namespace lrsd {

namespace {

template <class T>
void PutLe(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  for (size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  }
  out.write(bytes.data(), bytes.size());
}

template <class T>
T GetLe(std::istream& in, const char* field) {
  std::array<unsigned char, sizeof(T)> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw FormatError(std::string("LRSD: truncated while reading ") + field);
  }
  T value = 0;
  for (size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(bytes[i]) << (8 * i);
  }
  return value;
}

std::ofstream OpenOut(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream OpenIn(const std::filesystem::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

double ParseDouble(std::string_view token, const std::string& where) {
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t'))
    token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t' ||
                            token.back() == '\r'))
    token.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw FormatError(where + ": cannot parse '" + std::string(token) + "'");
  }
  return v;
}

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

void EncodeLrsd(std::ostream& out, const Matrix& m) {
  out.write("LRSD", 4);
  PutLe<std::uint16_t>(out, kLrsdVersion);
  PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(m.rows()));
  PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(m.cols()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      PutLe<std::uint64_t>(out, std::bit_cast<std::uint64_t>(m(i, j)));
    }
  }
}

Matrix DecodeLrsd(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, "LRSD", 4) != 0) {
    throw FormatError("LRSD: bad magic");
  }
  const auto version = GetLe<std::uint16_t>(in, "version");
  if (version != kLrsdVersion) {
    throw FormatError("LRSD: unsupported version " + std::to_string(version));
  }
  const auto rows = GetLe<std::uint32_t>(in, "rows");
  const auto cols = GetLe<std::uint32_t>(in, "cols");
  Matrix m(rows, cols);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) = std::bit_cast<double>(GetLe<std::uint64_t>(in, "values"));
    }
  }
  return m;
}

void WriteLrsd(const std::filesystem::path& path, const Matrix& m) {
  auto out = OpenOut(path, true);
  EncodeLrsd(out, m);
  if (!out) throw IoError("write failed: " + path.string());
}

Matrix ReadLrsd(const std::filesystem::path& path) {
  auto in = OpenIn(path, true);
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (!ec && size >= 14) {
    // Reject a size/header disagreement before allocating.
    char header[14];
    in.read(header, 14);
    std::uint64_t rows = 0, cols = 0;
    for (int i = 0; i < 4; ++i) {
      rows |= std::uint64_t(static_cast<unsigned char>(header[6 + i])) << (8 * i);
      cols |= std::uint64_t(static_cast<unsigned char>(header[10 + i])) << (8 * i);
    }
    if (size != 14 + 8 * rows * cols) {
      throw FormatError(path.string() + ": LRSD size does not match header");
    }
    in.seekg(0);
  }
  try {
    return DecodeLrsd(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void WriteCsv(const std::filesystem::path& path, const Matrix& m) {
  auto out = OpenOut(path, false);
  out.precision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Matrix ReadCsv(const std::filesystem::path& path) {
  auto in = OpenIn(path, false);
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    for (auto tok : SplitCommas(line)) {
      row.push_back(ParseDouble(tok, path.string() + ":" + std::to_string(lineno)));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw FormatError(path.string() + ": ragged row at line " +
                        std::to_string(lineno));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError(path.string() + ": empty CSV");
  Matrix m(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

void WriteMask(const std::filesystem::path& path, const ObservationMask& mask) {
  auto out = OpenOut(path, false);
  if (mask.is_full()) {
    out << "FULL\n";
  } else {
    for (const auto& e : mask.entries()) out << e.row << ',' << e.col << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

ObservationMask ReadMask(const std::filesystem::path& path, Index rows,
                         Index cols) {
  auto in = OpenIn(path, false);
  std::vector<ObservationMask::Entry> entries;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == "FULL") {
      if (!entries.empty()) throw FormatError(path.string() + ": FULL mixed with indices");
      return ObservationMask::Full(rows, cols);
    }
    auto parts = SplitCommas(line);
    if (parts.size() != 2) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) +
                        ": expected i,j");
    }
    const std::string where = path.string() + ":" + std::to_string(lineno);
    const double i = ParseDouble(parts[0], where);
    const double j = ParseDouble(parts[1], where);
    if (i != std::floor(i) || j != std::floor(j)) {
      throw FormatError(where + ": indices must be integers");
    }
    entries.push_back({static_cast<Index>(i), static_cast<Index>(j)});
  }
  if (entries.empty()) throw FormatError(path.string() + ": empty mask file");
  try {
    return ObservationMask::FromEntries(rows, cols, std::move(entries));
  } catch (const InvalidArgument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Matrix ReadMatrix(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? ReadCsv(path) : ReadLrsd(path);
}

}  // namespace lrsd
