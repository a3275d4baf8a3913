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

// Shot histograms and their JSON file format.
//
// A histogram maps a bitstring to a count. Character k from the right is
// qubit k, so qubit 0 is the least significant (rightmost) bit, matching the
// classical-bit mapping of the QASM exporter. The file format is a JSON
// object of bitstring -> count with an optional sibling "metadata" object:
//
//   {"010": 1200, "111": 2896, "metadata": {"config_hash": "...", "member": 3}}

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace rmtbench {

using Histogram = std::map<std::string, std::uint64_t>;

std::string bitstring(std::size_t value, std::size_t n_bits);
std::uint64_t total_shots(const Histogram& h) noexcept;
// Outcome frequencies indexed by basis state; length 2^n_bits.
std::vector<double> frequencies(const Histogram& h, std::size_t n_bits);

struct HistogramFile {
  Histogram counts;
  nlohmann::json metadata = nlohmann::json::object();
};

// Throws Error(kMalformedHistogram) with a diagnostic naming the offending
// field (and line when the JSON itself does not parse).
HistogramFile parse_histogram_text(std::string_view text);
HistogramFile parse_histograms(const std::filesystem::path& file);

std::string serialize_histogram(const Histogram& h, const nlohmann::json& metadata = nlohmann::json::object());

}  // namespace rmtbench
