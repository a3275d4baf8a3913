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

#include "rmtbench/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <thread>

#include "rmtbench/errors.hpp"
#include "rmtbench/json_io.hpp"
#include "rmtbench/rmt_stats.hpp"
#include "rmtbench/spectral.hpp"

namespace rmtbench {
namespace {

using nlohmann::json;

constexpr double kMaxFailureFraction = 0.05;
constexpr std::size_t kQuantileGrid = 99;

template <typename Enum>
struct EnumName {
  Enum value;
  const char* name;
};

constexpr EnumName<ProtocolMode> kModes[] = {{ProtocolMode::kCircuit, "circuit"},
                                             {ProtocolMode::kAbstractChannel, "abstract-channel"}};
constexpr EnumName<ChannelConstruction> kConstructions[] = {{ChannelConstruction::kGinibre, "ginibre"},
                                                            {ChannelConstruction::kStinespring, "stinespring"},
                                                            {ChannelConstruction::kChoi, "choi"}};
constexpr EnumName<AncillaMode> kAncillaModes[] = {{AncillaMode::kReuse, "reuse"}, {AncillaMode::kFresh, "fresh"}};
constexpr EnumName<InitialState> kInitialStates[] = {{InitialState::kZero, "zero"}, {InitialState::kRandom, "random"}};

template <typename Enum, std::size_t K>
const char* to_name(const EnumName<Enum> (&table)[K], Enum value) {
  for (const auto& e : table)
    if (e.value == value) return e.name;
  return "unknown";
}

template <typename Enum, std::size_t K>
Enum from_name(const EnumName<Enum> (&table)[K], const std::string& name, const char* field) {
  for (const auto& e : table)
    if (name == e.name) return e.value;
  throw Error(ErrorCode::kMalformedInput, std::string("unknown ") + field + " '" + name + "'");
}

bool is_member_failure(ErrorCode code) {
  return code == ErrorCode::kDegenerateFixedSpace || code == ErrorCode::kNonConvergence;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<double> apply_readout(std::vector<double> p, std::span<const ReadoutError> errors) {
  for (std::size_t q = 0; q < errors.size(); ++q) {
    const auto& e = errors[q];
    if (e.p1_given_0 == 0.0 && e.p0_given_1 == 0.0) continue;
    const std::size_t bit = std::size_t{1} << q;
    std::vector<double> next(p.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i & bit) continue;
      const double p0 = p[i], p1 = p[i | bit];
      next[i] = p0 * (1.0 - e.p1_given_0) + p1 * e.p0_given_1;
      next[i | bit] = p0 * e.p1_given_0 + p1 * (1.0 - e.p0_given_1);
    }
    p = std::move(next);
  }
  return p;
}

DensityMatrix initial_state(const ProtocolConfig& cfg, RngStream rng) {
  const std::size_t n = cfg.system_dim();
  if (cfg.initial_state == InitialState::kZero) return DensityMatrix::basis_state(n, 0);
  ComplexVector psi(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) = rng.complex_normal();
  return DensityMatrix::pure(psi / psi.norm());
}

SummaryStatistics summarize(const std::vector<double>& xs) {
  if (xs.empty()) return {};
  const EmpiricalDistribution d(xs);
  return {d.size(), d.mean(), d.variance(), d.kurtosis()};
}

double mean_of(const std::vector<MemberResult>& members, double MemberResult::*field) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& m : members)
    if (m.ok) {
      sum += m.*field;
      ++n;
    }
  return n ? sum / static_cast<double>(n) : 0.0;
}

void finalize(BenchmarkReport& report, const ReferenceOutputDistribution& ref, bool with_spectra) {
  auto& a = report.aggregates;
  a.members_ok = static_cast<std::size_t>(std::count_if(report.members.begin(), report.members.end(),
                                                        [](const MemberResult& m) { return m.ok; }));
  a.members_failed = report.members.size() - a.members_ok;
  const auto pooled = report.pooled_outputs();
  if (pooled.empty()) throw Error(ErrorCode::kRunFailed, "no successful members to aggregate");
  const EmpiricalDistribution outputs(pooled);
  a.outputs = summarize(pooled);
  a.ks = ks_distance(outputs, ref);
  if (with_spectra) {
    a.steady_eigenvalues = summarize(report.pooled_steady_eigenvalues());
    a.mean_gap = mean_of(report.members, &MemberResult::gap);
    a.mean_second_modulus = mean_of(report.members, &MemberResult::second_modulus);
  }
  a.reference_quantiles.clear();
  for (std::size_t k = 1; k <= kQuantileGrid; ++k) {
    const double p = static_cast<double>(k) / static_cast<double>(kQuantileGrid + 1);
    a.reference_quantiles.push_back({p, ref.samples.quantile(p), outputs.quantile(p)});
  }
}

BenchmarkReport new_report(const ProtocolConfig& cfg, const RunOptions& options, const char* source) {
  BenchmarkReport report;
  report.source = source;
  report.config = config_to_json(cfg);
  report.config_hash = config_hash(cfg);
  report.reference = {cfg.system_dim(), cfg.rank, cfg.reference_seed, cfg.reference_samples};
  report.version = std::string(library_version());
  if (options.timestamp) report.timestamp = utc_timestamp();
  return report;
}

ReferenceCache::Handle fetch_reference(const ProtocolConfig& cfg, const RunOptions& options) {
  ReferenceCache local;
  ReferenceCache& cache = options.cache ? *options.cache : local;
  return cache.get(cfg.system_dim(), cfg.rank, cfg.reference_seed, cfg.reference_samples);
}

MemberResult run_member(const ProtocolConfig& cfg, std::size_t index) {
  MemberResult m;
  m.index = index;
  m.stream = index;
  const RngStream stream(cfg.master_seed, index);
  try {
    const KrausChannel channel = member_channel(cfg, index);
    const ChannelSpectrum spectrum = analyze_spectrum(channel);
    const SteadyStateDecomposition steady = steady_state(channel);
    m.kraus_rank = channel.rank();
    m.gap = spectrum.gap;
    m.second_modulus = spectrum.second_modulus();
    m.spectrum = spectrum.eigenvalues;
    m.steady_eigenvalues = steady.eigenvalues;
    m.repetitions = cfg.resolved_repetitions();

    const DensityMatrix rho = iterate(channel, initial_state(cfg, stream.substream(2)), m.repetitions);
    const auto readout =
        cfg.noise ? cfg.noise->readout_errors(cfg.n_ancilla(), cfg.n_system) : std::vector<ReadoutError>{};
    if (cfg.shots) {
      RngStream shot_rng = stream.substream(1);
      m.histogram = sample_shots(rho, *cfg.shots, readout, shot_rng);
      m.probabilities = frequencies(*m.histogram, cfg.n_system);
    } else {
      m.probabilities = apply_readout(rho.diagonal(), readout);
    }
  } catch (const Error& e) {
    if (!is_member_failure(e.code())) throw;
    m = MemberResult{};
    m.index = index;
    m.stream = index;
    m.ok = false;
    m.error = e.what();
  }
  return m;
}

}  // namespace

std::size_t ProtocolConfig::n_ancilla() const {
  if (rank < 2 || !std::has_single_bit(rank))
    throw Error(ErrorCode::kInvalidParams, "circuit mode needs a power-of-two rank >= 2");
  return static_cast<std::size_t>(std::countr_zero(rank));
}

std::size_t ProtocolConfig::resolved_repetitions() const {
  return epsilon ? convergence_iterations(rank, *epsilon) : repetitions;
}

void ProtocolConfig::validate() const {
  if (n_system < 1 || n_system > 8) throw Error(ErrorCode::kInvalidParams, "n_system must lie in 1..8");
  if (ensemble_size < 1) throw Error(ErrorCode::kInvalidParams, "ensemble size must be at least 1");
  if (!epsilon && repetitions < 1) throw Error(ErrorCode::kInvalidParams, "repetitions must be at least 1");
  if (shots && *shots < 1) throw Error(ErrorCode::kInvalidParams, "shots must be at least 1");
  if (reference_samples < kMinReferenceSamples)
    throw Error(ErrorCode::kInvalidParams, "reference needs at least 10^4 samples");
  if (rank < 1 || rank > system_dim() * system_dim()) throw Error(ErrorCode::kInvalidParams, "rank must lie in 1..N^2");
  if (mode == ProtocolMode::kCircuit) {
    if (depth < 1) throw Error(ErrorCode::kInvalidParams, "depth must be at least 1");
    if (n_system + n_ancilla() > 10) throw Error(ErrorCode::kInvalidParams, "circuit register too large");
  } else if (noise) {
    throw Error(ErrorCode::kInvalidParams, "noise models apply to circuit mode only");
  }
  if (noise) noise->validate();
  (void)resolved_repetitions();
}

json config_to_json(const ProtocolConfig& cfg) {
  json doc;
  doc["format"] = "rmtbench.config/1";
  doc["mode"] = to_name(kModes, cfg.mode);
  doc["n_system"] = cfg.n_system;
  doc["depth"] = cfg.depth;
  doc["rank"] = cfg.rank;
  doc["construction"] = to_name(kConstructions, cfg.construction);
  doc["ensemble_size"] = cfg.ensemble_size;
  if (cfg.epsilon) {
    doc["repetitions"] = {{"auto_epsilon", *cfg.epsilon}};
  } else {
    doc["repetitions"] = cfg.repetitions;
  }
  if (cfg.shots) {
    doc["shots"] = *cfg.shots;
  } else {
    doc["shots"] = "exact";
  }
  doc["master_seed"] = cfg.master_seed;
  doc["ancilla"] = to_name(kAncillaModes, cfg.ancilla);
  doc["initial_state"] = to_name(kInitialStates, cfg.initial_state);
  doc["reference"] = {{"seed", cfg.reference_seed}, {"samples", cfg.reference_samples}};
  doc["noise"] = cfg.noise ? noise_to_json(*cfg.noise) : json(nullptr);
  return doc;
}

ProtocolConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kMalformedInput, "config must be a JSON object");
  ProtocolConfig cfg;
  try {
    if (auto it = doc.find("mode"); it != doc.end()) cfg.mode = from_name(kModes, it->get<std::string>(), "mode");
    cfg.n_system = doc.value("n_system", cfg.n_system);
    cfg.depth = doc.value("depth", cfg.depth);
    cfg.rank = doc.value("rank", cfg.rank);
    if (auto it = doc.find("construction"); it != doc.end())
      cfg.construction = from_name(kConstructions, it->get<std::string>(), "construction");
    cfg.ensemble_size = doc.value("ensemble_size", cfg.ensemble_size);
    if (auto it = doc.find("repetitions"); it != doc.end()) {
      if (it->is_object()) {
        cfg.epsilon = require_field(*it, "auto_epsilon").get<double>();
      } else {
        cfg.repetitions = it->get<std::size_t>();
      }
    }
    if (auto it = doc.find("shots"); it != doc.end()) {
      if (it->is_string()) {
        if (it->get<std::string>() != "exact") throw Error(ErrorCode::kMalformedInput, "shots must be a count or \"exact\"");
      } else {
        cfg.shots = it->get<std::uint64_t>();
      }
    }
    cfg.master_seed = doc.value("master_seed", cfg.master_seed);
    if (auto it = doc.find("ancilla"); it != doc.end())
      cfg.ancilla = from_name(kAncillaModes, it->get<std::string>(), "ancilla mode");
    if (auto it = doc.find("initial_state"); it != doc.end())
      cfg.initial_state = from_name(kInitialStates, it->get<std::string>(), "initial state");
    if (auto it = doc.find("reference"); it != doc.end()) {
      cfg.reference_seed = it->value("seed", cfg.reference_seed);
      cfg.reference_samples = it->value("samples", cfg.reference_samples);
    }
    if (auto it = doc.find("noise"); it != doc.end() && !it->is_null()) cfg.noise = noise_from_json(*it);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string config_hash(const ProtocolConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : config_to_json(cfg).dump()) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
  return out;
}

CircuitIR member_circuit(const ProtocolConfig& cfg, std::size_t member) {
  RngStream map_rng = RngStream(cfg.master_seed, member).substream(0);
  return build_random_circuit(cfg.n_system, cfg.depth, map_rng, cfg.n_ancilla());
}

KrausChannel member_channel(const ProtocolConfig& cfg, std::size_t member) {
  if (cfg.mode == ProtocolMode::kCircuit) {
    SimOptions sim;
    sim.ancilla = cfg.ancilla;
    return circuit_to_channel(member_circuit(cfg, member), cfg.noise, sim);
  }
  RngStream map_rng = RngStream(cfg.master_seed, member).substream(0);
  switch (cfg.construction) {
    case ChannelConstruction::kStinespring:
      return random_stinespring(cfg.n_system, cfg.rank, map_rng);
    case ChannelConstruction::kChoi:
      return random_choi_channel(cfg.n_system, cfg.rank, map_rng);
    case ChannelConstruction::kGinibre:
      break;
  }
  return random_ginibre_kraus(cfg.n_system, cfg.rank, map_rng);
}

BenchmarkReport run_benchmark(const ProtocolConfig& cfg, const RunOptions& options) {
  cfg.validate();
  BenchmarkReport report = new_report(cfg, options, "run");
  const auto reference = fetch_reference(cfg, options);

  const std::size_t m = cfg.ensemble_size;
  std::vector<MemberResult> results(m);
  std::vector<std::exception_ptr> errors(m);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < m; i = next.fetch_add(1)) {
      try {
        results[i] = run_member(cfg, i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t width = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  width = std::min(width, m);
  if (width <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < width; ++t) pool.emplace_back(worker);
  }
  // Ordered reduction: unexpected errors surface in member order, results are
  // pooled by index regardless of completion order.
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  report.members = std::move(results);

  const auto failed = static_cast<std::size_t>(
      std::count_if(report.members.begin(), report.members.end(), [](const MemberResult& r) { return !r.ok; }));
  if (static_cast<double>(failed) > kMaxFailureFraction * static_cast<double>(m))
    throw Error(ErrorCode::kRunFailed,
                std::to_string(failed) + " of " + std::to_string(m) + " members failed (limit 5%)");
  finalize(report, *reference, true);
  return report;
}

ReportComparison compare_reports(const BenchmarkReport& a, const BenchmarkReport& b) {
  if (a.reference.N != b.reference.N || a.reference.r != b.reference.r)
    throw Error(ErrorCode::kIncompatibleConfigs, "reports differ in (N, r)");
  const auto pa = a.pooled_outputs();
  const auto pb = b.pooled_outputs();
  if (pa.empty() || pb.empty()) throw Error(ErrorCode::kIncompatibleConfigs, "report has no pooled outputs");
  const EmpiricalDistribution da(pa), db(pb);
  ReportComparison cmp;
  cmp.ks_two_sample = ks_distance(da, db);
  cmp.ks_delta = a.aggregates.ks - b.aggregates.ks;
  cmp.variance_delta = a.aggregates.outputs.variance - b.aggregates.outputs.variance;
  cmp.mean_gap_delta = a.aggregates.mean_gap - b.aggregates.mean_gap;
  cmp.mean_second_modulus_delta = a.aggregates.mean_second_modulus - b.aggregates.mean_second_modulus;
  for (double p : {0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95})
    cmp.quantile_deltas.push_back({p, da.quantile(p), db.quantile(p)});
  return cmp;
}

json comparison_to_json(const ReportComparison& cmp) {
  json doc;
  doc["format"] = "rmtbench.comparison/1";
  doc["ks_two_sample"] = cmp.ks_two_sample;
  doc["ks_delta"] = cmp.ks_delta;
  doc["variance_delta"] = cmp.variance_delta;
  doc["mean_gap_delta"] = cmp.mean_gap_delta;
  doc["mean_second_modulus_delta"] = cmp.mean_second_modulus_delta;
  auto& q = doc["quantiles"] = json::array();
  for (const auto& d : cmp.quantile_deltas)
    q.push_back({{"probability", d.probability}, {"a", d.reference}, {"b", d.sample}, {"delta", d.sample - d.reference}});
  return doc;
}

BenchmarkReport ingest_external_histograms(std::span<const std::filesystem::path> files, const ProtocolConfig& cfg,
                                           const RunOptions& options) {
  cfg.validate();
  if (files.empty()) throw Error(ErrorCode::kMalformedHistogram, "no histogram files given");
  BenchmarkReport report = new_report(cfg, options, "ingest");
  for (std::size_t i = 0; i < files.size(); ++i) {
    HistogramFile h = parse_histograms(files[i]);
    const std::size_t bits = h.counts.begin()->first.size();
    if (bits != cfg.n_system)
      throw Error(ErrorCode::kConfigMismatch, files[i].string() + ": " + std::to_string(bits) +
                                                  "-bit outcomes, config has n_system = " + std::to_string(cfg.n_system));
    if (auto it = h.metadata.find("config_hash"); it != h.metadata.end() && it->is_string() &&
                                                  it->get<std::string>() != report.config_hash)
      throw Error(ErrorCode::kConfigMismatch, files[i].string() + ": histogram was produced under a different config");
    MemberResult m;
    m.index = i;
    m.stream = i;
    m.probabilities = frequencies(h.counts, cfg.n_system);
    m.histogram = std::move(h.counts);
    report.members.push_back(std::move(m));
  }
  finalize(report, *fetch_reference(cfg, options), false);
  return report;
}

}  // namespace rmtbench
