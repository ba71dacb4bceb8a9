// Serial reference vs OpenMP kernels.
//   bench_wpt --benchmark_filter=Decompose

#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "hrvwp/pipeline.hpp"

using namespace hrvwp;

namespace {

UniformSignal noise(std::size_t n) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> d;
  UniformSignal s{std::vector<double>(n), 4.0, 0.0};
  for (auto& x : s.samples) x = d(rng);
  return s;
}

RRSeries rr_series(std::size_t beats, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, 8.0);
  RRSeries s;
  s.subject_id = "s" + std::to_string(seed);
  double t = 0.0;
  for (std::size_t i = 0; i < beats; ++i) {
    const double rr = 800.0 + 30.0 * std::sin(2 * std::numbers::pi * 0.1 * t) + jitter(rng);
    s.intervals_ms.push_back(rr);
    t += rr / 1000.0;
  }
  return s;
}

template <bool Parallel>
void BM_Decompose(benchmark::State& state) {
  const auto signal = noise(static_cast<std::size_t>(state.range(0)));
  const auto bank = daubechies_filters(4);
  for (auto _ : state) {
    auto tree = Parallel ? wpt_decompose(signal, 6, bank) : reference::wpt_decompose(signal, 6, bank);
    benchmark::DoNotOptimize(tree.level_buffer(6).data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_Reconstruct(benchmark::State& state) {
  const auto bank = daubechies_filters(4);
  const auto tree = wpt_decompose(noise(static_cast<std::size_t>(state.range(0))), 6, bank);
  std::vector<std::size_t> leaves(64);
  std::iota(leaves.begin(), leaves.end(), 0);
  for (auto _ : state) {
    auto x = Parallel ? wpt_reconstruct_nodes(tree, leaves) : reference::wpt_reconstruct_nodes(tree, leaves);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_Batch(benchmark::State& state) {
  std::vector<RRSeries> batch;
  for (int i = 0; i < state.range(0); ++i) batch.push_back(rr_series(1000, static_cast<std::uint64_t>(i)));
  const PipelineConfig cfg;
  std::vector<RecordingResult> out(batch.size());
  for (auto _ : state) {
    const auto n = static_cast<std::ptrdiff_t>(batch.size());
#pragma omp parallel for schedule(dynamic) if (Parallel)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = analyze_series(batch[static_cast<std::size_t>(i)], cfg);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Decompose<false>)->Name("Decompose/serial")->RangeMultiplier(4)->Range(1 << 12, 1 << 20);
BENCHMARK(BM_Decompose<true>)->Name("Decompose/omp")->RangeMultiplier(4)->Range(1 << 12, 1 << 20)->UseRealTime();
BENCHMARK(BM_Reconstruct<false>)->Name("Reconstruct/serial")->RangeMultiplier(4)->Range(1 << 12, 1 << 20);
BENCHMARK(BM_Reconstruct<true>)->Name("Reconstruct/omp")->RangeMultiplier(4)->Range(1 << 12, 1 << 20)->UseRealTime();
BENCHMARK(BM_Batch<false>)->Name("Batch/serial")->Arg(16)->Arg(135);
BENCHMARK(BM_Batch<true>)->Name("Batch/omp")->Arg(16)->Arg(135)->UseRealTime();

BENCHMARK_MAIN();
