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

#include <benchmark/benchmark.h>

#include "rmtbench/channel.hpp"
#include "rmtbench/circuit.hpp"
#include "rmtbench/protocol.hpp"
#include "rmtbench/qasm.hpp"
#include "rmtbench/rmt_stats.hpp"
#include "rmtbench/simulator.hpp"
#include "rmtbench/spectral.hpp"

namespace rb = rmtbench;

static void BM_EigGeneral64(benchmark::State& state) {
  rb::RngStream rng(1, 0);
  const auto sup = rb::to_superoperator(rb::random_ginibre_kraus(3, 2, rng));
  for (auto _ : state) benchmark::DoNotOptimize(rb::eig_general(sup.matrix));
}
BENCHMARK(BM_EigGeneral64);

static void BM_SteadyState(benchmark::State& state) {
  rb::RngStream rng(2, 0);
  const auto ch = rb::random_ginibre_kraus(static_cast<std::size_t>(state.range(0)), 2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(rb::steady_state(ch));
}
BENCHMARK(BM_SteadyState)->Arg(2)->Arg(3)->Arg(4);

static void BM_CircuitToChannel(benchmark::State& state) {
  rb::RngStream rng(3, 0);
  const auto c = rb::build_random_circuit(3, 3, rng);
  std::optional<rb::NoiseModel> noise;
  if (state.range(0)) noise = rb::NoiseModel{0.05, 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(rb::circuit_to_channel(c, noise));
}
BENCHMARK(BM_CircuitToChannel)->Arg(0)->Arg(1);

static void BM_ReferenceSampling(benchmark::State& state) {
  const auto params = rb::make_mp_params(8, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(rb::reference_output_distribution(params, 100'000, rb::RngStream(4, 0)));
}
BENCHMARK(BM_ReferenceSampling)->Unit(benchmark::kMillisecond);

static void BM_KsVsReference(benchmark::State& state) {
  const auto ref = rb::reference_output_distribution(rb::make_mp_params(8, 2), 1'000'000, rb::RngStream(5, 0));
  rb::RngStream rng(6, 0);
  std::vector<double> xs(800);
  for (auto& x : xs) x = rng.uniform() / 4.0;
  const rb::EmpiricalDistribution d(xs);
  for (auto _ : state) benchmark::DoNotOptimize(rb::ks_distance(d, ref));
}
BENCHMARK(BM_KsVsReference);

static void BM_DecomposeSU4(benchmark::State& state) {
  rb::RngStream rng(7, 0);
  const auto u = rb::sample_haar_su4(rng).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(rb::decompose_two_qubit(u));
}
BENCHMARK(BM_DecomposeSU4);

BENCHMARK_MAIN();
