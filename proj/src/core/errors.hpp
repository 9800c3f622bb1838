// Copyright 2026 the decolab developers
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

namespace decolab {

enum class ErrorCode {
  InvalidArgument,
  NotHermitian,
  NotPSD,
  DiagonalNotUnit,
  NotNormalized,
  DimensionMismatch,
  ProjectorsNotOrthogonal,
  ProjectorsIncomplete,
  InvalidProbabilityVector,
  DecompositionMismatch,
  Internal,
};

/** Exception carrying a machine-readable code alongside the message. */
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::DiagonalNotUnit: return "DiagonalNotUnit";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ProjectorsNotOrthogonal: return "ProjectorsNotOrthogonal";
    case ErrorCode::ProjectorsIncomplete: return "ProjectorsIncomplete";
    case ErrorCode::InvalidProbabilityVector: return "InvalidProbabilityVector";
    case ErrorCode::DecompositionMismatch: return "DecompositionMismatch";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace decolab
