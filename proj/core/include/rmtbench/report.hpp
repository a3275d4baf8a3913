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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rmtbench/histogram.hpp"

namespace rmtbench {

std::string_view library_version() noexcept;

struct MemberResult {
  std::size_t index = 0;
  std::uint64_t stream = 0;  // RNG stream index under the master seed
  bool ok = true;
  std::string error;  // set when !ok
  std::size_t kraus_rank = 0;
  std::size_t repetitions = 0;
  double gap = 0.0;
  double second_modulus = 0.0;
  std::vector<std::complex<double>> spectrum;  // superoperator eigenvalues
  std::vector<double> steady_eigenvalues;     // descending
  std::vector<double> probabilities;          // index = outcome, qubit 0 = LSB
  std::optional<Histogram> histogram;
};

struct SummaryStatistics {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;
  double kurtosis = 0.0;
};

struct QuantilePair {
  double probability = 0.0;
  double reference = 0.0;
  double sample = 0.0;
};

struct ReportAggregates {
  std::size_t members_ok = 0;
  std::size_t members_failed = 0;
  SummaryStatistics outputs;
  SummaryStatistics steady_eigenvalues;
  double ks = 0.0;  // pooled outputs vs reference
  double mean_gap = 0.0;
  double mean_second_modulus = 0.0;
  std::vector<QuantilePair> reference_quantiles;
};

struct ReferenceInfo {
  std::size_t N = 0;
  std::size_t r = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
};

struct BenchmarkReport {
  std::string source = "run";  // "run" or "ingest"
  nlohmann::json config = nlohmann::json::object();
  std::string config_hash;
  ReferenceInfo reference;
  std::vector<MemberResult> members;
  ReportAggregates aggregates;
  std::string version;
  std::optional<std::string> timestamp;

  std::size_t n_bits() const noexcept;
  // Successful members only, in member order.
  std::vector<double> pooled_outputs() const;
  std::vector<double> pooled_steady_eigenvalues() const;
};

nlohmann::json report_to_json(const BenchmarkReport& report);
BenchmarkReport report_from_json(const nlohmann::json& doc);

// Canonical text form; identical reports serialise to identical bytes.
std::string serialize_report(const BenchmarkReport& report);

// Writes <dir>/report.json plus CSV sidecars: steady_eigenvalues.csv,
// probabilities.csv, cdf.csv, quantiles.csv, reference_quantiles.csv and
// spectrum.csv.
void save_report(const BenchmarkReport& report, const std::filesystem::path& directory);

// Accepts a report.json path or the directory containing it.
BenchmarkReport load_report(const std::filesystem::path& path);

}  // namespace rmtbench
