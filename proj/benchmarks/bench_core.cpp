// Microbenchmarks for the hot paths: state construction, compressed
// reductions at large N, discord optimization, and dense evolution.

#include "darwinsim/branchstate.hpp"
#include "darwinsim/infomeasures.hpp"
#include "darwinsim/oracle.hpp"
#include "darwinsim/sweeps.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace darwinsim;

ModelParams large_params() {
  ModelParams p;
  p.n_env = 250;
  return p;
}

void BM_build_state_n250(benchmark::State& state) {
  const ModelParams p = large_params();
  for (auto _ : state) benchmark::DoNotOptimize(build_state(p));
}
BENCHMARK(BM_build_state_n250);

void BM_reduced_spectrum_fragment_n250(benchmark::State& state) {
  const BranchState s = build_state(large_params());
  const SubsystemSelector sel = SubsystemSelector::env(125);
  for (auto _ : state) benchmark::DoNotOptimize(reduced_spectrum(s, sel));
}
BENCHMARK(BM_reduced_spectrum_fragment_n250);

void BM_reduce_joint_qubit_n250(benchmark::State& state) {
  const BranchState s = build_state(large_params());
  const SubsystemSelector sel = SubsystemSelector::system_plus_env(1);
  for (auto _ : state) benchmark::DoNotOptimize(reduce(s, sel));
}
BENCHMARK(BM_reduce_joint_qubit_n250);

void BM_mutual_information_n250(benchmark::State& state) {
  const BranchState s = build_state(large_params());
  const SubsystemSelector sys = SubsystemSelector::system();
  const SubsystemSelector frag = SubsystemSelector::env(125);
  for (auto _ : state) benchmark::DoNotOptimize(mutual_information(s, sys, frag));
}
BENCHMARK(BM_mutual_information_n250);

void BM_discord_system(benchmark::State& state) {
  const DensityMatrix rho = reduce(build_state(ModelParams{}), SubsystemSelector::system());
  for (auto _ : state) benchmark::DoNotOptimize(discord_measured_on_qubit(rho, 0));
}
BENCHMARK(BM_discord_system);

void BM_time_sweep_row_n250(benchmark::State& state) {
  RunConfig cfg;
  cfg.params.n_env = 250;
  cfg.threads = 1;
  cfg.time_grid = {0.61};
  for (auto _ : state) benchmark::DoNotOptimize(run_time_sweep(cfg));
}
BENCHMARK(BM_time_sweep_row_n250);

void BM_dense_evolve_n6(benchmark::State& state) {
  const DenseParams p = DenseParams::from(ModelParams{});
  for (auto _ : state) benchmark::DoNotOptimize(dense_evolve(p));
}
BENCHMARK(BM_dense_evolve_n6);

}  // namespace

BENCHMARK_MAIN();
