// Copyright 2026  The lsfvc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace lsfvc {

/// Every failure raised by the library carries one of these codes so callers
/// (and tests) can tell error conditions apart without parsing messages.
enum class ErrorCode {
  kFileNotFound,
  kUnsupportedFormat,
  kTruncatedData,
  kUnwritablePath,
  kInvalidArgument,
  kDimensionMismatch,
  kSignalTooShort,
  kUnstableFilter,
  kOddOrder,
  kInvalidLsf,
  kNoConvergence,
  kDivergence,
  kVersionMismatch,
  kParseError,
  kPairingMismatch,
  kDegenerateDistance,
};

inline const char* ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFileNotFound: return "file not found";
    case ErrorCode::kUnsupportedFormat: return "unsupported format";
    case ErrorCode::kTruncatedData: return "truncated data";
    case ErrorCode::kUnwritablePath: return "unwritable path";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kSignalTooShort: return "signal too short";
    case ErrorCode::kUnstableFilter: return "unstable filter";
    case ErrorCode::kOddOrder: return "odd order";
    case ErrorCode::kInvalidLsf: return "invalid lsf";
    case ErrorCode::kNoConvergence: return "no convergence";
    case ErrorCode::kDivergence: return "divergence";
    case ErrorCode::kVersionMismatch: return "version mismatch";
    case ErrorCode::kParseError: return "parse error";
    case ErrorCode::kPairingMismatch: return "pairing mismatch";
    case ErrorCode::kDegenerateDistance: return "degenerate distance";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ToString(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lsfvc
