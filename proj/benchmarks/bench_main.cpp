#include <benchmark/benchmark.h>

#include "rspcycles/flow.hpp"
#include "rspcycles/game.hpp"
#include "rspcycles/harness.hpp"
#include "rspcycles/maps.hpp"
#include "rspcycles/network.hpp"
#include "rspcycles/stability.hpp"

namespace {

const rsp::PayoffParams kParams(-0.3, -0.2);

const rsp::GameState& sample_state() {
  static const rsp::GameState s({0.5, 0.3, 0.2}, {0.1, 0.6, 0.3});
  return s;
}

void BM_ReplicatorField(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rsp::replicator_field(sample_state(), kParams));
}
BENCHMARK(BM_ReplicatorField);

void BM_Rk4Step(benchmark::State& state) {
  rsp::Rk4Stepper stepper(kParams, 1e-3);
  rsp::Vec6 v = sample_state().vector();
  double t = 0.0;
  for (auto _ : state) {
    stepper.step(v, t);
    t += 1e-3;
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_Rk4Step);

void BM_LogRk4Step(benchmark::State& state) {
  rsp::LogRk4Stepper stepper(kParams, 1e-2);
  rsp::Vec6 u = rsp::LogRk4Stepper::to_log(sample_state().vector());
  for (auto _ : state) {
    stepper.step(u);
    benchmark::DoNotOptimize(u);
  }
}
BENCHMARK(BM_LogRk4Step);

void BM_C0ReturnMatrix(benchmark::State& state) {
  const auto& c0 = rsp::quotient_network().cycle(rsp::CycleId::C0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rsp::cycle_transition_matrix(c0, rsp::NodeId::Xi0, kParams));
  }
}
BENCHMARK(BM_C0ReturnMatrix);

void BM_Dominance(benchmark::State& state) {
  const auto& c0 = rsp::quotient_network().cycle(rsp::CycleId::C0);
  const rsp::Mat3 m = rsp::cycle_transition_matrix(c0, rsp::NodeId::Xi0, kParams).m;
  for (auto _ : state) benchmark::DoNotOptimize(rsp::dominance(m));
}
BENCHMARK(BM_Dominance);

void BM_IndicesClosedForm(benchmark::State& state) {
  const auto& c2 = rsp::quotient_network().cycle(rsp::CycleId::C2);
  for (auto _ : state) benchmark::DoNotOptimize(rsp::closed_form_indices(c2, kParams));
}
BENCHMARK(BM_IndicesClosedForm);

void BM_IndicesMatrixPath(benchmark::State& state) {
  const auto& c2 = rsp::quotient_network().cycle(rsp::CycleId::C2);
  for (auto _ : state) benchmark::DoNotOptimize(rsp::stability_indices_matrix_path(c2, kParams));
}
BENCHMARK(BM_IndicesMatrixPath);

void BM_RegionSweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rsp::run_region_sweep(n));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_RegionSweep)->Arg(21)->Arg(51)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
