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

#pragma once

// Matrix <-> JSON helpers shared by the channel, circuit, and report formats.
// A matrix is stored row-major as a flat array of interleaved (re, im) pairs.

#include <nlohmann/json.hpp>

#include "rmtbench/linalg.hpp"

namespace rmtbench {

nlohmann::json matrix_entries_to_json(const ComplexMatrix& m);
// Throws kMalformedInput unless `entries` holds exactly 2*rows*cols numbers.
ComplexMatrix matrix_entries_from_json(const nlohmann::json& entries, std::size_t rows,
                                       std::size_t cols);

// Typed field access that reports the offending key on failure.
const nlohmann::json& require_field(const nlohmann::json& doc, const char* key);

}  // namespace rmtbench
