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

#include "rmtbench/json_io.hpp"

#include <string>

#include "rmtbench/errors.hpp"

namespace rmtbench {

nlohmann::json matrix_entries_to_json(const ComplexMatrix& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out.push_back(m(i, j).real());
      out.push_back(m(i, j).imag());
    }
  return out;
}

ComplexMatrix matrix_entries_from_json(const nlohmann::json& entries, std::size_t rows,
                                       std::size_t cols) {
  if (!entries.is_array() || entries.size() != 2 * rows * cols)
    throw Error(ErrorCode::kMalformedInput,
                "expected " + std::to_string(2 * rows * cols) + " interleaved re/im numbers");
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const auto& re = entries[k++];
      const auto& im = entries[k++];
      if (!re.is_number() || !im.is_number())
        throw Error(ErrorCode::kMalformedInput, "matrix entries must be numbers");
      m(i, j) = Complex(re.get<double>(), im.get<double>());
    }
  return m;
}

const nlohmann::json& require_field(const nlohmann::json& doc, const char* key) {
  if (!doc.is_object()) throw Error(ErrorCode::kMalformedInput, "expected a JSON object");
  auto it = doc.find(key);
  if (it == doc.end()) throw Error(ErrorCode::kMalformedInput, std::string("missing field '") + key + "'");
  return *it;
}

}  // namespace rmtbench
