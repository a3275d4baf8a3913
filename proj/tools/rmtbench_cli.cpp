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

// rmtbench command-line driver: run, compare, ingest, export-qasm, reference.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rmtbench/errors.hpp"
#include "rmtbench/protocol.hpp"
#include "rmtbench/qasm.hpp"
#include "rmtbench/reference_cache.hpp"

namespace fs = std::filesystem;
using namespace rmtbench;

namespace {

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, path.string() + ": " + e.what());
  }
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

// Flags mirroring ProtocolConfig; anything given overrides --config.
struct ConfigFlags {
  std::string config_file;
  std::optional<std::size_t> qubits, depth, reps, ensemble, rank, reference_samples;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> shots, seed, reference_seed;
  bool exact = false;
  std::string noise_file, mode, construction, ancilla, initial_state, cache_dir;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "JSON config file (flags override it)")->check(CLI::ExistingFile);
    app->add_option("--qubits", qubits, "system qubits n (N = 2^n)");
    app->add_option("--depth", depth, "brickwork depth d (circuit mode)");
    auto* r = app->add_option("--reps", reps, "repetitions t");
    auto* e = app->add_option("--epsilon", epsilon, "choose t automatically for accuracy epsilon");
    r->excludes(e);
    app->add_option("--ensemble", ensemble, "ensemble size M");
    auto* s = app->add_option("--shots", shots, "shots per member");
    auto* x = app->add_flag("--exact", exact, "use exact output probabilities");
    s->excludes(x);
    app->add_option("--rank", rank, "Kraus rank r (circuit mode: 2^ancillas)");
    app->add_option("--noise-file", noise_file, "noise model JSON")->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "master seed");
    app->add_option("--mode", mode, "circuit | abstract-channel")
        ->check(CLI::IsMember({"circuit", "abstract-channel"}));
    app->add_option("--construction", construction, "abstract-channel construction")
        ->check(CLI::IsMember({"ginibre", "stinespring", "choi"}));
    app->add_option("--ancilla", ancilla, "reuse | fresh")->check(CLI::IsMember({"reuse", "fresh"}));
    app->add_option("--initial-state", initial_state, "zero | random")->check(CLI::IsMember({"zero", "random"}));
    app->add_option("--reference-seed", reference_seed, "seed of the reference sample");
    app->add_option("--reference-samples", reference_samples, "reference sample count");
    app->add_option("--cache-dir", cache_dir, "directory for cached reference samples");
  }

  ProtocolConfig build() const {
    nlohmann::json doc = config_file.empty() ? nlohmann::json::object() : read_json(config_file);
    if (qubits) doc["n_system"] = *qubits;
    if (depth) doc["depth"] = *depth;
    if (reps) doc["repetitions"] = *reps;
    if (epsilon) doc["repetitions"] = {{"auto_epsilon", *epsilon}};
    if (ensemble) doc["ensemble_size"] = *ensemble;
    if (shots) doc["shots"] = *shots;
    if (exact) doc["shots"] = "exact";
    if (rank) doc["rank"] = *rank;
    if (seed) doc["master_seed"] = *seed;
    if (!mode.empty()) doc["mode"] = mode;
    if (!construction.empty()) doc["construction"] = construction;
    if (!ancilla.empty()) doc["ancilla"] = ancilla;
    if (!initial_state.empty()) doc["initial_state"] = initial_state;
    if (reference_seed) doc["reference"]["seed"] = *reference_seed;
    if (reference_samples) doc["reference"]["samples"] = *reference_samples;
    if (!noise_file.empty()) doc["noise"] = read_json(noise_file);
    return config_from_json(doc);
  }

  std::optional<fs::path> cache() const {
    return cache_dir.empty() ? std::nullopt : std::optional<fs::path>(cache_dir);
  }
};

void print_summary(const BenchmarkReport& report) {
  const auto& a = report.aggregates;
  std::cout << "members ok " << a.members_ok << ", failed " << a.members_failed << "\n"
            << "KS vs reference " << a.ks << "\n"
            << "output mean " << a.outputs.mean << ", variance " << a.outputs.variance << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum benchmarking with random dynamical maps"};
  app.set_version_flag("--version", std::string(library_version()));
  app.require_subcommand(1);

  ConfigFlags run_flags;
  std::string run_out = "rmtbench-report";
  std::size_t threads = 1;
  bool timestamp = false;
  auto* run = app.add_subcommand("run", "run the benchmark protocol and write a report");
  run_flags.attach(run);
  run->add_option("--out", run_out, "output directory");
  run->add_option("--threads", threads, "worker threads (0 = hardware concurrency)");
  run->add_flag("--timestamp", timestamp, "record a UTC timestamp (breaks byte-identical reruns)");

  std::string cmp_a, cmp_b, cmp_out;
  auto* compare = app.add_subcommand("compare", "compare two reports");
  compare->add_option("a", cmp_a, "first report (file or directory)")->required();
  compare->add_option("b", cmp_b, "second report (file or directory)")->required();
  compare->add_option("--out", cmp_out, "write the comparison JSON here");

  ConfigFlags ingest_flags;
  std::vector<std::string> ingest_files;
  std::string ingest_out = "rmtbench-ingest";
  auto* ingest = app.add_subcommand("ingest", "score external shot histograms (one file per member)");
  ingest_flags.attach(ingest);
  ingest->add_option("files", ingest_files, "histogram JSON files")->required()->check(CLI::ExistingFile);
  ingest->add_option("--out", ingest_out, "output directory");

  ConfigFlags qasm_flags;
  std::size_t member = 0, qasm_reps = 1;
  bool fresh_layout = false;
  std::string circuit_file, qasm_out;
  auto* qasm = app.add_subcommand("export-qasm", "export a member circuit as OpenQASM 3");
  qasm_flags.attach(qasm);
  qasm->add_option("--member", member, "ensemble member index");
  qasm->add_option("--circuit", circuit_file, "export this circuit JSON instead")->check(CLI::ExistingFile);
  qasm->add_option("--repetitions", qasm_reps, "circuit blocks (measure+reset between)")->check(CLI::PositiveNumber);
  qasm->add_flag("--fresh-ancilla", fresh_layout, "one fresh ancilla per block instead of reset");
  qasm->add_option("--out", qasm_out, "output .qasm file (stdout if omitted)");

  std::size_t ref_qubits = 3, ref_rank = 2, ref_samples = kDefaultReferenceSamples;
  std::uint64_t ref_seed = kDefaultReferenceSeed;
  std::string ref_dir = "rmtbench-cache";
  auto* reference = app.add_subcommand("reference", "pre-build the cached reference distribution");
  reference->add_option("--qubits", ref_qubits, "system qubits n");
  reference->add_option("--rank", ref_rank, "rank r");
  reference->add_option("--samples", ref_samples, "sample count");
  reference->add_option("--seed", ref_seed, "reference seed");
  reference->add_option("--cache-dir", ref_dir, "cache directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const ProtocolConfig cfg = run_flags.build();
      ReferenceCache cache(run_flags.cache());
      const BenchmarkReport report = run_benchmark(cfg, {threads, &cache, timestamp});
      save_report(report, run_out);
      print_summary(report);
      std::cout << "report written to " << run_out << "\n";
    } else if (*compare) {
      const auto cmp = comparison_to_json(compare_reports(load_report(cmp_a), load_report(cmp_b)));
      if (cmp_out.empty()) {
        std::cout << cmp.dump(2) << "\n";
      } else {
        write_file(cmp_out, cmp.dump(2) + "\n");
      }
    } else if (*ingest) {
      const ProtocolConfig cfg = ingest_flags.build();
      ReferenceCache cache(ingest_flags.cache());
      std::vector<fs::path> files(ingest_files.begin(), ingest_files.end());
      const BenchmarkReport report = ingest_external_histograms(files, cfg, {1, &cache, false});
      save_report(report, ingest_out);
      print_summary(report);
    } else if (*qasm) {
      QasmExportOptions options;
      options.fresh_ancilla = fresh_layout;
      CircuitIR circuit;
      if (!circuit_file.empty()) {
        circuit = circuit_from_json(read_json(circuit_file));
      } else {
        const ProtocolConfig cfg = qasm_flags.build();
        if (cfg.mode != ProtocolMode::kCircuit) throw Error(ErrorCode::kInvalidParams, "export-qasm needs circuit mode");
        circuit = member_circuit(cfg, member);
        options.metadata = {{"config_hash", config_hash(cfg)}, {"master_seed", cfg.master_seed}, {"member", member}};
      }
      const QasmProgram program = export_qasm(circuit, qasm_reps, options);
      if (qasm_out.empty()) {
        std::cout << program.source;
      } else {
        write_file(qasm_out, program.source);
      }
    } else if (*reference) {
      ReferenceCache cache{fs::path(ref_dir)};
      const auto ref = cache.get(std::size_t{1} << ref_qubits, ref_rank, ref_seed, ref_samples);
      std::cout << "reference N=" << ref->params.N << " r=" << ref->params.r << " samples=" << ref->sample_count
                << " cached at " << cache.file_for(ref->params.N, ref_rank, ref_seed, ref_samples)->string() << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "rmtbench: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
