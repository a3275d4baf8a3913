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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rmtbench/channel.hpp"
#include "rmtbench/circuit.hpp"
#include "rmtbench/noise.hpp"
#include "rmtbench/reference_cache.hpp"
#include "rmtbench/report.hpp"
#include "rmtbench/simulator.hpp"

namespace rmtbench {

enum class ProtocolMode { kAbstractChannel, kCircuit };
enum class ChannelConstruction { kGinibre, kStinespring, kChoi };
enum class InitialState { kZero, kRandom };

inline constexpr std::uint64_t kDefaultReferenceSeed = 1;
inline constexpr std::size_t kDefaultReferenceSamples = 1'000'000;

struct ProtocolConfig {
  std::size_t n_system = 3;
  std::size_t depth = 3;              // circuit mode only
  std::size_t repetitions = 40;       // used when epsilon is unset
  std::optional<double> epsilon;      // auto(eps): t = convergence_iterations(r, eps)
  std::size_t ensemble_size = 100;
  std::optional<std::uint64_t> shots; // nullopt = exact probabilities
  std::size_t rank = 2;               // r; circuit mode uses log2(r) ancillas
  std::optional<NoiseModel> noise;    // circuit mode only
  std::uint64_t master_seed = 0;
  ProtocolMode mode = ProtocolMode::kCircuit;
  ChannelConstruction construction = ChannelConstruction::kGinibre;
  AncillaMode ancilla = AncillaMode::kReuse;
  InitialState initial_state = InitialState::kZero;
  std::uint64_t reference_seed = kDefaultReferenceSeed;
  std::size_t reference_samples = kDefaultReferenceSamples;

  std::size_t system_dim() const noexcept { return std::size_t{1} << n_system; }
  std::size_t n_ancilla() const;
  std::size_t resolved_repetitions() const;
  // Throws kInvalidParams.
  void validate() const;
};

nlohmann::json config_to_json(const ProtocolConfig& cfg);
ProtocolConfig config_from_json(const nlohmann::json& doc);
// FNV-1a over the canonical config JSON, as 16 hex digits.
std::string config_hash(const ProtocolConfig& cfg);

struct RunOptions {
  std::size_t threads = 1;
  ReferenceCache* cache = nullptr;  // a private in-memory cache when null
  bool timestamp = false;
};

// Member i draws from RngStream(master_seed, i): substream 0 builds the map,
// 1 samples shots, 2 draws the random initial state.
CircuitIR member_circuit(const ProtocolConfig& cfg, std::size_t member);
KrausChannel member_channel(const ProtocolConfig& cfg, std::size_t member);

BenchmarkReport run_benchmark(const ProtocolConfig& cfg, const RunOptions& options = {});

struct ReportComparison {
  double ks_two_sample = 0.0;
  double ks_delta = 0.0;  // a.ks - b.ks
  double variance_delta = 0.0;
  double mean_gap_delta = 0.0;
  double mean_second_modulus_delta = 0.0;
  std::vector<QuantilePair> quantile_deltas;  // reference = a, sample = b
};

// Throws kIncompatibleConfigs unless both reports share (N, r).
ReportComparison compare_reports(const BenchmarkReport& a, const BenchmarkReport& b);
nlohmann::json comparison_to_json(const ReportComparison& cmp);

// One histogram file per ensemble member.
BenchmarkReport ingest_external_histograms(std::span<const std::filesystem::path> files, const ProtocolConfig& cfg,
                                           const RunOptions& options = {});

}  // namespace rmtbench
