// Copyright 2026 The qchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include <benchmark/benchmark.h>

#include "qchan/measures.hpp"
#include "qchan/tomo_sim.hpp"

namespace {

using namespace qchan;

void BM_EigHermitian(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto rho = channels::random_state(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::eig_hermitian(rho.op()));
}
BENCHMARK(BM_EigHermitian)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_QuantumMemory(benchmark::State& state) {
  const auto e = channels::depolarizing(0.8);
  for (auto _ : state) benchmark::DoNotOptimize(measures::quantum_memory_robustness(e));
}
BENCHMARK(BM_QuantumMemory)->Unit(benchmark::kMillisecond);

void BM_TemporalSteering(benchmark::State& state) {
  const auto a = correlations::temporal_assemblage(channels::depolarizing(0.8), channels::pauli_measurements());
  for (auto _ : state) benchmark::DoNotOptimize(measures::steering_robustness(a));
}
BENCHMARK(BM_TemporalSteering)->Unit(benchmark::kMillisecond);

void BM_NonMacrorealism(benchmark::State& state) {
  const auto s = channels::chsh_temporal_settings();
  const auto t = correlations::correlation_from_pdo(channels::pdo_of_channel(channels::depolarizing(0.8)), s.t0, s.t1);
  for (auto _ : state) benchmark::DoNotOptimize(measures::non_macrorealism_robustness(t));
}
BENCHMARK(BM_NonMacrorealism)->Unit(benchmark::kMillisecond);

void BM_DiamondNorm(benchmark::State& state) {
  const auto e = channels::depolarizing(0.8);
  for (auto _ : state) benchmark::DoNotOptimize(measures::channel_negativity(e));
}
BENCHMARK(BM_DiamondNorm)->Unit(benchmark::kMillisecond);

void BM_ProcessMle(benchmark::State& state) {
  tomo::ExperimentConfig cfg;
  cfg.v = 0.8;
  const auto counts = tomo::sample_counts(cfg, 1);
  for (auto _ : state) benchmark::DoNotOptimize(tomo::mle_process(counts));
}
BENCHMARK(BM_ProcessMle)->Unit(benchmark::kMillisecond);

void BM_Reconstruct(benchmark::State& state) {
  tomo::ExperimentConfig cfg;
  cfg.v = 0.8;
  const auto counts = tomo::sample_counts(cfg, 1);
  for (auto _ : state) benchmark::DoNotOptimize(tomo::reconstruct(counts));
}
BENCHMARK(BM_Reconstruct)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
