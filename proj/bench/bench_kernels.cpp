// Serial reference drivers against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>

#include "hsps/config.hpp"
#include "hsps/predictor.hpp"

namespace {

hsps::ExperimentConfig bench_config() { return hsps::preset("mu005").experiment; }

void BM_simulate_serial(benchmark::State& state) {
  const auto cfg = bench_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(hsps::simulate_trials_serial(cfg, static_cast<std::uint64_t>(state.range(0)), 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_simulate_omp(benchmark::State& state) {
  const auto cfg = bench_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(hsps::simulate_trials(cfg, static_cast<std::uint64_t>(state.range(0)), 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

std::vector<double> grid_mus() {
  std::vector<double> mus;
  for (int i = 0; i < 50; ++i) mus.push_back(hsps::kMuLower * std::pow(hsps::kMuUpper / hsps::kMuLower, i / 49.0));
  return mus;
}

std::vector<int> grid_bins() {
  std::vector<int> bins;
  for (int n = 1; n <= 40; ++n) bins.push_back(n);
  return bins;
}

void BM_grid_serial(benchmark::State& state) {
  const auto cfg = bench_config();
  const auto mus = grid_mus();
  const auto bins = grid_bins();
  for (auto _ : state) benchmark::DoNotOptimize(hsps::evaluate_grid_serial(cfg, mus, bins));
}

void BM_grid_omp(benchmark::State& state) {
  const auto cfg = bench_config();
  const auto mus = grid_mus();
  const auto bins = grid_bins();
  for (auto _ : state) benchmark::DoNotOptimize(hsps::evaluate_grid(cfg, mus, bins));
}

}  // namespace

BENCHMARK(BM_simulate_serial)->Arg(1 << 18)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_simulate_omp)->Arg(1 << 18)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_grid_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_grid_omp)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
