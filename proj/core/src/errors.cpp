// Copyright 2026 The rmtbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rmtbench/errors.hpp"

namespace rmtbench {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kNotHermitian: return "NotHermitian";
    case ErrorCode::kSingular: return "Singular";
    case ErrorCode::kNotCP: return "NotCP";
    case ErrorCode::kNotTP: return "NotTP";
    case ErrorCode::kNoFixedPoint: return "NoFixedPoint";
    case ErrorCode::kDegenerateFixedSpace: return "DegenerateFixedSpace";
    case ErrorCode::kRankOne: return "RankOne";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kInvalidState: return "InvalidState";
    case ErrorCode::kDecompositionFailure: return "DecompositionFailure";
    case ErrorCode::kMalformedHistogram: return "MalformedHistogram";
    case ErrorCode::kConfigMismatch: return "ConfigMismatch";
    case ErrorCode::kIncompatibleConfigs: return "IncompatibleConfigs";
    case ErrorCode::kMalformedInput: return "MalformedInput";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kRunFailed: return "RunFailed";
  }
  return "Unknown";
}

}  // namespace rmtbench
