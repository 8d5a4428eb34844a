// SPDX-License-Identifier: Apache-2.0
// Serial reference vs OpenMP kernels over synthetic batches.
#include <benchmark/benchmark.h>

#include "agentharness/parallel.hpp"
#include "agentharness/prng.hpp"

namespace {

std::vector<std::vector<std::string>> action_batch(std::size_t n) {
  ah::SplitMix64 rng(11);
  std::vector<std::vector<std::string>> out(n);
  for (auto& seq : out) {
    const auto len = 50 + rng.below(150);
    for (std::uint64_t i = 0; i < len; ++i) seq.push_back("go to shelf " + std::to_string(rng.below(3)));
  }
  return out;
}

std::vector<std::vector<double>> confidence_batch(std::size_t n) {
  ah::SplitMix64 rng(12);
  std::vector<std::vector<double>> out(n);
  for (auto& c : out) {
    c.resize(32 + rng.below(96));
    for (auto& x : c) x = rng.unit();
  }
  return out;
}

void BM_RetryLoopsSerial(benchmark::State& state) {
  const auto batch = action_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ah::retry_loop_counts_serial(batch, 3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RetryLoopsOpenMP(benchmark::State& state) {
  const auto batch = action_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ah::retry_loop_counts(batch, 3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = ah::kernel_threads();
}

void BM_FactorGateSerial(benchmark::State& state) {
  const auto batch = confidence_batch(static_cast<std::size_t>(state.range(0)));
  const ah::GateConfig g{ah::GateMode::factor, 0.9, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(ah::gate_commit_counts_serial(batch, g));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FactorGateOpenMP(benchmark::State& state) {
  const auto batch = confidence_batch(static_cast<std::size_t>(state.range(0)));
  const ah::GateConfig g{ah::GateMode::factor, 0.9, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(ah::gate_commit_counts(batch, g));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = ah::kernel_threads();
}

}  // namespace

BENCHMARK(BM_RetryLoopsSerial)->Arg(256)->Arg(4096);
BENCHMARK(BM_RetryLoopsOpenMP)->Arg(256)->Arg(4096);
BENCHMARK(BM_FactorGateSerial)->Arg(256)->Arg(4096);
BENCHMARK(BM_FactorGateOpenMP)->Arg(256)->Arg(4096);

BENCHMARK_MAIN();
