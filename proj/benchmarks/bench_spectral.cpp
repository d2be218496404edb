#include <benchmark/benchmark.h>

#include <cmath>

#include "matprod/pressure.hpp"
#include "matprod/tilt.hpp"

using namespace matprod;

namespace {

MatrixLaw law_r() {
  return make_law_rank_one(2, {std::exp(-1.0), std::exp(1.0)}, {0.5, 0.5});
}

MatrixLaw law_ab() {
  return make_law_explicit(2,
                           {PositiveMatrix(2, {2.0, 1.0, 1.0, 2.0}),
                            PositiveMatrix(2, {1.0, 2.0, 3.0, 1.0})},
                           {0.5, 0.5});
}

void BM_AssembleTransfer(benchmark::State& state) {
  MatrixLaw law = law_ab();
  ProjGrid grid = build_grid(2, state.range(0));
  for (auto _ : state) {
    TransferOperator op = assemble_transfer(law, 0.3, grid);
    benchmark::DoNotOptimize(op.size());
  }
}
BENCHMARK(BM_AssembleTransfer)->Arg(128)->Arg(512)->Arg(2048);

void BM_LeadingTriple(benchmark::State& state) {
  MatrixLaw law = law_ab();
  ProjGrid grid = build_grid(2, state.range(0));
  TransferOperator op = assemble_transfer(law, 0.3, grid);
  for (auto _ : state) {
    SpectralTriple t = leading_triple(op);
    benchmark::DoNotOptimize(t.kappa);
  }
}
BENCHMARK(BM_LeadingTriple)->Arg(128)->Arg(512);

void BM_PressureCurve(benchmark::State& state) {
  MatrixLaw law = law_r();
  ProjGrid grid = build_grid(2, 512);
  auto s_grid = chebyshev_s_grid(0.5, 21);
  for (auto _ : state) {
    PressureCurve c = pressure_curve(law, s_grid, grid);
    benchmark::DoNotOptimize(c.lambda.data());
  }
}
BENCHMARK(BM_PressureCurve);

void BM_TiltedTrajectory(benchmark::State& state) {
  MatrixLaw law = law_r();
  ProjGrid grid = build_grid(2, 512);
  SpectralTriple t = leading_triple(assemble_transfer(law, 0.25, grid));
  std::uint64_t rep = 0;
  for (auto _ : state) {
    RandomStream rng(3, rep++);
    TiltedRun run = run_tilted_trajectory(law, t, grid, ProjPoint::uniform(2), 400, rng,
                                          ObservableSet{false, false, false});
    benchmark::DoNotOptimize(run.weight);
  }
  state.SetItemsProcessed(state.iterations() * 400);
}
BENCHMARK(BM_TiltedTrajectory);

}  // namespace
