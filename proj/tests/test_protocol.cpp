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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "rmtbench/errors.hpp"
#include "rmtbench/histogram.hpp"
#include "rmtbench/noise.hpp"
#include "rmtbench/protocol.hpp"
#include "rmtbench/reference_cache.hpp"
#include "rmtbench/report.hpp"
#include "rmtbench/simulator.hpp"
#include "rmtbench/spectral.hpp"

using namespace rmtbench;
namespace fs = std::filesystem;

namespace {

ReferenceCache& shared_cache() {
  static ReferenceCache cache;
  return cache;
}

BenchmarkReport run(const ProtocolConfig& cfg, std::size_t threads = 1) {
  RunOptions opt;
  opt.threads = threads;
  opt.cache = &shared_cache();
  return run_benchmark(cfg, opt);
}

ProtocolConfig circuit_config(std::uint64_t seed = 11) {
  ProtocolConfig cfg;
  cfg.n_system = 3;
  cfg.depth = 3;
  cfg.ensemble_size = 100;
  cfg.master_seed = seed;
  return cfg;
}

ProtocolConfig with_reset_error(ProtocolConfig cfg, double p) {
  NoiseModel n;
  n.reset_error = p;
  cfg.noise = n;
  return cfg;
}

double output_variance(const BenchmarkReport& r) { return r.aggregates.outputs.variance; }

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("rmtbench_protocol_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(ProtocolConfig, JsonRoundTripAndHash) {
  auto cfg = circuit_config();
  cfg.epsilon = 1e-3;
  cfg.shots = 4096;
  cfg.noise = NoiseModel{};
  cfg.noise->depolarizing = 0.1;
  const auto doc = nlohmann::json::parse(config_to_json(cfg).dump());
  EXPECT_EQ(doc.at("format"), "rmtbench.config/1");
  EXPECT_EQ(doc.at("repetitions").at("auto_epsilon"), 1e-3);
  const auto back = config_from_json(doc);
  EXPECT_EQ(config_to_json(back), config_to_json(cfg));
  EXPECT_EQ(config_hash(back), config_hash(cfg));
  EXPECT_EQ(config_hash(cfg).size(), 16u);
  auto other = cfg;
  other.master_seed = 12;
  EXPECT_NE(config_hash(other), config_hash(cfg));
  EXPECT_EQ(config_from_json(nlohmann::json{{"shots", "exact"}}).shots, std::nullopt);
  EXPECT_THROW(config_from_json(nlohmann::json{{"shots", "many"}}), Error);
  EXPECT_THROW(config_from_json(nlohmann::json{{"mode", "analog"}}), Error);
}

TEST(ProtocolConfig, Validation) {
  auto cfg = circuit_config();
  EXPECT_EQ(cfg.n_ancilla(), 1u);
  cfg.rank = 4;
  EXPECT_EQ(cfg.n_ancilla(), 2u);
  cfg.rank = 3;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = circuit_config();
  cfg.ensemble_size = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = with_reset_error(circuit_config(), 0.1);
  cfg.mode = ProtocolMode::kAbstractChannel;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = circuit_config();
  cfg.epsilon = 1e-3;
  EXPECT_EQ(cfg.resolved_repetitions(), 20u);
}

TEST(RunBenchmark, SingleAbstractMemberExact) {
  ProtocolConfig cfg;
  cfg.mode = ProtocolMode::kAbstractChannel;
  cfg.ensemble_size = 1;
  cfg.repetitions = 40;
  const auto r = run(cfg);
  ASSERT_EQ(r.members.size(), 1u);
  const auto& p = r.members[0].probabilities;
  ASSERT_EQ(p.size(), 8u);
  double sum = 0;
  for (double v : p) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    sum += v;
  }
  EXPECT_NEAR(sum, 1.0, 1e-9);
  EXPECT_EQ(r.members[0].repetitions, 40u);
  EXPECT_EQ(r.members[0].kraus_rank, 2u);
}

TEST(RunBenchmark, NoiselessCircuitMatchesReference) {
  const auto r = run(circuit_config());
  EXPECT_EQ(r.members.size(), 100u);
  EXPECT_EQ(r.aggregates.members_ok, 100u);
  EXPECT_EQ(r.aggregates.outputs.count, 800u);
  EXPECT_LE(r.aggregates.ks, 0.05);
  EXPECT_EQ(r.aggregates.reference_quantiles.size(), 99u);
}

TEST(RunBenchmark, ResetNoiseRaisesKs) {
  const auto clean = run(circuit_config());
  const auto noisy = run(with_reset_error(circuit_config(), 0.3));
  EXPECT_GT(noisy.aggregates.ks, clean.aggregates.ks);
}

TEST(RunBenchmark, ResetErrorLadder) {
  double prev_var = 1e9, prev_ks = -1;
  for (double p : {0.0, 0.1, 0.25, 0.5}) {
    const auto r = run(with_reset_error(circuit_config(), p));
    EXPECT_LT(output_variance(r), prev_var) << p;
    EXPECT_GE(r.aggregates.ks, prev_ks) << p;
    prev_var = output_variance(r);
    prev_ks = r.aggregates.ks;
  }
}

TEST(RunBenchmark, DepolarizingLadder) {
  double prev_var = 1e9, prev_ks = -1;
  for (double w : {0.0, 0.05, 0.15}) {
    auto cfg = circuit_config();
    cfg.noise = NoiseModel{};
    cfg.noise->depolarizing = w;
    const auto r = run(cfg);
    EXPECT_LT(output_variance(r), prev_var) << w;
    EXPECT_GE(r.aggregates.ks, prev_ks) << w;
    prev_var = output_variance(r);
    prev_ks = r.aggregates.ks;
  }
}

TEST(RunBenchmark, ReproducibleAcrossThreadCounts) {
  auto cfg = circuit_config();
  cfg.ensemble_size = 30;
  cfg.shots = 1000;
  EXPECT_EQ(serialize_report(run(cfg, 1)), serialize_report(run(cfg, 4)));
}

TEST(RunBenchmark, ShotsMatchExactWithinFiveSigma) {
  ProtocolConfig cfg;
  cfg.mode = ProtocolMode::kAbstractChannel;
  cfg.ensemble_size = 5;
  const auto exact = run(cfg);
  cfg.shots = 100000;
  const auto shots = run(cfg);
  for (std::size_t m = 0; m < 5; ++m) {
    ASSERT_TRUE(shots.members[m].histogram.has_value());
    for (std::size_t x = 0; x < 8; ++x) {
      const double p = exact.members[m].probabilities[x];
      EXPECT_NEAR(shots.members[m].probabilities[x], p, 5 * std::sqrt(p * (1 - p) / 1e5) + 1e-12);
    }
  }
}

TEST(RunBenchmark, AutoRepetitionsReachSteadyState) {
  for (auto mode : {ProtocolMode::kAbstractChannel, ProtocolMode::kCircuit}) {
    ProtocolConfig cfg;
    cfg.mode = mode;
    cfg.epsilon = 1e-3;
    const auto t = cfg.resolved_repetitions();
    for (std::size_t m = 0; m < 20; ++m) {
      const auto ch = mode == ProtocolMode::kCircuit ? circuit_to_channel(member_circuit(cfg, m), std::nullopt)
                                                    : member_channel(cfg, m);
      const auto rho_t = iterate(ch, DensityMatrix::basis_state(8, 0), t);
      EXPECT_LE(trace_distance(rho_t.matrix(), iterate(ch, rho_t, 5).matrix()), 1e-2) << m;
    }
  }
}

TEST(RunBenchmark, InitialStateIndependence) {
  auto cfg = circuit_config();
  cfg.ensemble_size = 20;
  cfg.repetitions = 60;
  const auto zero = run(cfg);
  cfg.initial_state = InitialState::kRandom;
  const auto rnd = run(cfg);
  for (std::size_t m = 0; m < 20; ++m)
    for (std::size_t x = 0; x < 8; ++x) EXPECT_NEAR(zero.members[m].probabilities[x], rnd.members[m].probabilities[x], 1e-3);
}

TEST(RunBenchmark, ConstructionsAgree) {
  std::vector<BenchmarkReport> reports;
  for (auto c : {ChannelConstruction::kGinibre, ChannelConstruction::kStinespring, ChannelConstruction::kChoi}) {
    ProtocolConfig cfg;
    cfg.mode = ProtocolMode::kAbstractChannel;
    cfg.construction = c;
    cfg.ensemble_size = 200;
    reports.push_back(run(cfg));
  }
  EXPECT_LE(compare_reports(reports[0], reports[1]).ks_two_sample, 0.05);
  EXPECT_LE(compare_reports(reports[0], reports[2]).ks_two_sample, 0.05);
}

TEST(CompareReports, Examples) {
  const auto clean = run(circuit_config());
  EXPECT_EQ(compare_reports(clean, clean).ks_two_sample, 0.0);
  const auto noisy = run(with_reset_error(circuit_config(), 0.5));
  const auto cmp = compare_reports(clean, noisy);
  EXPECT_GT(cmp.ks_two_sample, 0.1);
  EXPECT_GT(cmp.variance_delta, 0.0);
  const auto doc = comparison_to_json(cmp);
  EXPECT_EQ(doc.at("format"), "rmtbench.comparison/1");

  auto two = circuit_config();
  two.n_system = 2;
  two.ensemble_size = 5;
  try {
    compare_reports(clean, run(two));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompatibleConfigs);
  }
}

TEST(CompareReports, SeedsAgreeAtLargeEnsemble) {
  auto a = circuit_config(1), b = circuit_config(2);
  a.ensemble_size = b.ensemble_size = 200;
  EXPECT_LE(compare_reports(run(a), run(b)).ks_two_sample, 0.03);
}

TEST(CompareReports, FreshAndReuseAncillaAgree) {
  // Same seeds, so both variants see the same circuits.
  auto reuse = circuit_config(), fresh = circuit_config();
  fresh.ancilla = AncillaMode::kFresh;
  EXPECT_LE(compare_reports(run(reuse), run(fresh)).ks_two_sample, 0.03);
}

TEST(Report, JsonAndSidecars) {
  auto cfg = circuit_config();
  cfg.ensemble_size = 5;
  cfg.shots = 256;
  const auto r = run(cfg);
  const auto dir = scratch("report");
  save_report(r, dir);
  for (const char* f : {"report.json", "steady_eigenvalues.csv", "probabilities.csv", "spectrum.csv", "cdf.csv",
                        "quantiles.csv", "reference_quantiles.csv"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  const auto back = load_report(dir);
  EXPECT_EQ(serialize_report(back), serialize_report(r));
  EXPECT_EQ(serialize_report(load_report(dir / "report.json")), serialize_report(r));
  const auto doc = report_to_json(r);
  EXPECT_EQ(doc.at("format"), "rmtbench.report/1");
  EXPECT_FALSE(doc.at("provenance").contains("timestamp"));
  EXPECT_EQ(doc.at("config_hash"), config_hash(cfg));
  std::ifstream probs(dir / "probabilities.csv");
  std::string header;
  std::getline(probs, header);
  EXPECT_EQ(header, "member,outcome,probability");
  fs::remove_all(dir);
}

TEST(Ingest, SampledHistogramsReproduceDirectKs) {
  const auto cfg = circuit_config();
  const auto direct = run(cfg);
  const auto dir = scratch("ingest");
  std::vector<fs::path> files;
  for (const auto& m : direct.members) {
    ComplexMatrix diag = ComplexMatrix::Zero(8, 8);
    for (int x = 0; x < 8; ++x) diag(x, x) = m.probabilities[static_cast<std::size_t>(x)];
    RngStream rng(77, m.index);
    const auto h = sample_shots(DensityMatrix(diag), 100000, {}, rng);
    files.push_back(dir / ("member_" + std::to_string(m.index) + ".json"));
    std::ofstream(files.back()) << serialize_histogram(h, {{"config_hash", config_hash(cfg)}});
  }
  RunOptions opt;
  opt.cache = &shared_cache();
  const auto ingested = ingest_external_histograms(files, cfg, opt);
  EXPECT_EQ(ingested.source, "ingest");
  EXPECT_NEAR(ingested.aggregates.ks, direct.aggregates.ks, 0.02);
  fs::remove_all(dir);
}

TEST(Ingest, UniformHistogramsGivePointMassDistance) {
  const auto cfg = circuit_config();
  const auto dir = scratch("uniform");
  Histogram h;
  for (std::size_t x = 0; x < 8; ++x) h[bitstring(x, 3)] = 512;
  std::vector<fs::path> files;
  for (int k = 0; k < 4; ++k) {
    files.push_back(dir / ("u" + std::to_string(k) + ".json"));
    std::ofstream(files.back()) << serialize_histogram(h);
  }
  RunOptions opt;
  opt.cache = &shared_cache();
  const auto r = ingest_external_histograms(files, cfg, opt);
  const auto ref = shared_cache().get(8, 2, cfg.reference_seed, cfg.reference_samples);
  const auto& s = ref->samples.samples();
  const double below = static_cast<double>(std::lower_bound(s.begin(), s.end(), 0.125) - s.begin()) / s.size();
  const double upto = ref->samples.cdf(0.125);
  EXPECT_DOUBLE_EQ(r.aggregates.ks, std::max(below, 1.0 - upto));
  fs::remove_all(dir);
}

TEST(Ingest, Errors) {
  const auto cfg = circuit_config();
  const auto dir = scratch("errors");
  auto expect_code = [&](const std::string& text, ErrorCode code) {
    const auto f = dir / "h.json";
    std::ofstream(f) << text;
    const std::vector<fs::path> files{f};
    try {
      ingest_external_histograms(files, cfg, {1, &shared_cache(), false});
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code) << text;
    }
  };
  expect_code("", ErrorCode::kMalformedHistogram);
  expect_code("{}", ErrorCode::kMalformedHistogram);
  expect_code(R"({"01": 5})", ErrorCode::kConfigMismatch);
  expect_code(R"({"001": 5, "metadata": {"config_hash": "ffffffffffffffff"}})", ErrorCode::kConfigMismatch);
  EXPECT_THROW(ingest_external_histograms(std::vector<fs::path>{}, cfg), Error);
  fs::remove_all(dir);
}
