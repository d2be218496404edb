#include <benchmark/benchmark.h>

#include <cmath>

#include "matprod/simulate.hpp"

using namespace matprod;

namespace {

MatrixLaw law_ab() {
  return make_law_explicit(2,
                           {PositiveMatrix(2, {2.0, 1.0, 1.0, 2.0}),
                            PositiveMatrix(2, {1.0, 2.0, 3.0, 1.0})},
                           {0.5, 0.5});
}

void BM_RunBatchAllObservables(benchmark::State& state) {
  SimConfig cfg(law_ab());
  cfg.n = state.range(0);
  cfg.replicates = 2000;
  cfg.seed = 1;
  for (auto _ : state) {
    BatchResult b = run_batch(cfg);
    benchmark::DoNotOptimize(b.log_op_norm.data());
  }
  state.SetItemsProcessed(state.iterations() * cfg.n * cfg.replicates);
}
BENCHMARK(BM_RunBatchAllObservables)->Arg(64)->Arg(256)->Arg(1024);

void BM_RunBatchVecOnly(benchmark::State& state) {
  SimConfig cfg(law_ab());
  cfg.n = state.range(0);
  cfg.replicates = 2000;
  cfg.seed = 1;
  cfg.observables = {false, false, false};
  for (auto _ : state) {
    BatchResult b = run_batch(cfg);
    benchmark::DoNotOptimize(b.log_vec_norm.data());
  }
  state.SetItemsProcessed(state.iterations() * cfg.n * cfg.replicates);
}
BENCHMARK(BM_RunBatchVecOnly)->Arg(256)->Arg(1024);

void BM_StationarySample(benchmark::State& state) {
  MatrixLaw law = law_ab();
  for (auto _ : state) {
    RandomStream rng(7, 0);
    auto samples = stationary_sample(law, 64, 1000, rng);
    benchmark::DoNotOptimize(samples.data());
  }
  state.SetItemsProcessed(state.iterations() * 1064);
}
BENCHMARK(BM_StationarySample);

}  // namespace
