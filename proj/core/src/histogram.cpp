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

#include "rmtbench/histogram.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rmtbench/errors.hpp"

namespace rmtbench {
namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::kMalformedHistogram, what); }

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

std::string bitstring(std::size_t value, std::size_t n_bits) {
  std::string s(n_bits, '0');
  for (std::size_t k = 0; k < n_bits; ++k)
    if ((value >> k) & 1u) s[n_bits - 1 - k] = '1';
  return s;
}

std::uint64_t total_shots(const Histogram& h) noexcept {
  std::uint64_t total = 0;
  for (const auto& [_, count] : h) total += count;
  return total;
}

std::vector<double> frequencies(const Histogram& h, std::size_t n_bits) {
  std::vector<double> f(std::size_t{1} << n_bits, 0.0);
  const double total = static_cast<double>(total_shots(h));
  if (total == 0.0) return f;
  for (const auto& [bits, count] : h) {
    if (bits.size() != n_bits) malformed("bitstring '" + bits + "' does not have " + std::to_string(n_bits) + " bits");
    std::size_t index = 0;
    for (char c : bits) index = (index << 1) | static_cast<std::size_t>(c == '1');
    f[index] += static_cast<double>(count) / total;
  }
  return f;
}

HistogramFile parse_histogram_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    malformed("line " + std::to_string(line_of(text, e.byte)) + ": invalid JSON (" + e.what() + ")");
  }
  if (!doc.is_object()) malformed("top level must be a JSON object of bitstring -> count");

  HistogramFile file;
  std::size_t width = 0;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    if (key == "metadata") {
      if (!it.value().is_object()) malformed("field 'metadata' must be an object");
      file.metadata = it.value();
      continue;
    }
    if (key.empty() || key.find_first_not_of("01") != std::string::npos)
      malformed("field '" + key + "': key is not a bitstring of 0/1 characters");
    if (width == 0) width = key.size();
    if (key.size() != width) malformed("field '" + key + "': bitstrings have inconsistent lengths");
    const auto& value = it.value();
    if (!value.is_number_unsigned())
      malformed("field '" + key + "': count must be a non-negative integer");
    file.counts[key] = value.get<std::uint64_t>();
  }
  if (file.counts.empty()) malformed("histogram has no outcomes");
  if (total_shots(file.counts) == 0) malformed("histogram has zero total shots");
  return file;
}

HistogramFile parse_histograms(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_histogram_text(buffer.str());
}

std::string serialize_histogram(const Histogram& h, const nlohmann::json& metadata) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [bits, count] : h) doc[bits] = count;
  if (!metadata.empty()) doc["metadata"] = metadata;
  return doc.dump(2) + "\n";
}

}  // namespace rmtbench
