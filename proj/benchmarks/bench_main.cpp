#include <benchmark/benchmark.h>

#include "ptfloquet/floquet.hpp"
#include "ptfloquet/oracle.hpp"
#include "ptfloquet/reservoir.hpp"
#include "ptfloquet/wei_norman.hpp"

using namespace ptfloquet;

namespace {

CouplerParams broken_point() {
  CouplerParams p;
  p.loss = profile_for_target(0.25, 2.0);
  return p;
}

void BM_Monodromy2x2(benchmark::State& state) {
  const CouplerParams p = broken_point();
  for (auto _ : state) benchmark::DoNotOptimize(monodromy_2x2(p));
}
BENCHMARK(BM_Monodromy2x2)->Unit(benchmark::kMillisecond);

void BM_MonodromyFull(benchmark::State& state) {
  const CouplerParams p = broken_point();
  const TwoModeBasis b(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(monodromy_full(p, b));
}
BENCHMARK(BM_MonodromyFull)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_PropagatorTenPeriods(benchmark::State& state) {
  const CouplerParams p = broken_point();
  const TwoModeBasis b(3);
  const double z = 10 * p.loss.period();
  for (auto _ : state) benchmark::DoNotOptimize(propagator(p, z, b));
}
BENCHMARK(BM_PropagatorTenPeriods)->Unit(benchmark::kMillisecond);

void BM_OracleMonodromy(benchmark::State& state) {
  const CouplerParams p = broken_point();
  const TwoModeBasis b(3);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_monodromy(p, b));
}
BENCHMARK(BM_OracleMonodromy)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_SimulateArray(benchmark::State& state) {
  ReservoirConfig cfg = reservoir_for_target(0.125, 1.0);
  cfg.n_bath = static_cast<int>(state.range(0));
  cfg.z_max = 50.0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_array(cfg));
}
BENCHMARK(BM_SimulateArray)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
