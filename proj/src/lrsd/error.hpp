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

#pragma once

#include <stdexcept>
#include <string>

namespace lrsd {

enum class ErrorCode {
  kInvalidArgument = 1,
  kDimensionMismatch,
  kInvalidConfig,
  kIo,
  kFormat,
  kSvdNonConvergence,
  kThetaSearchFailure,
  kInternal,
};

// All library failures derive from Error; the C layer maps code() onto its
// status enum one-to-one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorCode::kInvalidArgument, what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what)
      : Error(ErrorCode::kDimensionMismatch, what) {}
};

class InvalidConfig : public Error {
 public:
  explicit InvalidConfig(const std::string& what)
      : Error(ErrorCode::kInvalidConfig, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::kIo, what) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what)
      : Error(ErrorCode::kFormat, what) {}
};

class SvdNonConvergence : public Error {
 public:
  explicit SvdNonConvergence(const std::string& what)
      : Error(ErrorCode::kSvdNonConvergence, what) {}
};

class ThetaSearchFailure : public Error {
 public:
  explicit ThetaSearchFailure(const std::string& what)
      : Error(ErrorCode::kThetaSearchFailure, what) {}
};

}  // namespace lrsd
