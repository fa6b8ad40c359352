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

// On-disk matrix and mask formats.
//
// LRSD binary: "LRSD" magic, u16 version (1), u32 rows, u32 cols, then
// rows*cols little-endian IEEE-754 doubles in row-major order.
// CSV: headerless, comma separated, one matrix row per line.
// Mask: zero-based "i,j" lines, or the single token FULL.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "lrsd/linalg.hpp"

namespace lrsd {

inline constexpr std::uint16_t kLrsdVersion = 1;

void WriteLrsd(const std::filesystem::path& path, const Matrix& m);
Matrix ReadLrsd(const std::filesystem::path& path);

void EncodeLrsd(std::ostream& out, const Matrix& m);
Matrix DecodeLrsd(std::istream& in);

void WriteCsv(const std::filesystem::path& path, const Matrix& m);
Matrix ReadCsv(const std::filesystem::path& path);

void WriteMask(const std::filesystem::path& path, const ObservationMask& mask);
ObservationMask ReadMask(const std::filesystem::path& path, Index rows,
                         Index cols);

// Picks the binary or CSV reader by extension (.csv is CSV, anything else is
// LRSD).
Matrix ReadMatrix(const std::filesystem::path& path);

}  // namespace lrsd
