#include "fairdyn/adversaries.hpp"
#include "fairdyn/allocators.hpp"
#include "fairdyn/policies.hpp"
#include "fairdyn/simulator.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace fairdyn;

namespace {

// Doubling-weight arrival streams are the worst case for the grouping
// allocator: every arrival reshapes the open group.
void BM_LogStarGeometric(benchmark::State& state) {
  const auto events = geometric_instance({state.range(0)});
  RunOptions opts;
  opts.check_invariants = false;
  for (auto _ : state) {
    LogStarAllocator alloc(TowerTable(), false, false);
    benchmark::DoNotOptimize(run(events, alloc, opts).report.total_disruptions);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LogStarGeometric)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

// Same instance with the referee checking exact feasibility and the
// 24-approximation after every event.
void BM_LogStarGeometricChecked(benchmark::State& state) {
  const auto events = geometric_instance({state.range(0)});
  RunOptions opts;
  opts.claimed_c = Frac(24);
  for (auto _ : state) {
    LogStarAllocator alloc;
    benchmark::DoNotOptimize(run(events, alloc, opts).report.total_disruptions);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LogStarGeometricChecked)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_ThresholdResetRandperm(benchmark::State& state) {
  RandomPermutationSpec spec;
  for (int e = 0; e < 10; ++e)
    for (std::int64_t rep = 0; rep < state.range(0) / 10; ++rep)
      spec.weights.push_back(BigInt(1) << e);
  spec.seed = 1234;
  spec.departures = DepartureRule::RandomAlive;
  const auto events = random_permutation_stream(spec);
  RunOptions opts;
  opts.claimed_c = Frac(4);
  for (auto _ : state) {
    ThresholdResetAllocator alloc(std::uint64_t(99));
    benchmark::DoNotOptimize(run(events, alloc, opts).report.total_disruptions);
  }
  state.SetItemsProcessed(state.iterations() * events.size());
}
BENCHMARK(BM_ThresholdResetRandperm)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_ExactGeometric(benchmark::State& state) {
  const auto events = geometric_instance({state.range(0)});
  RunOptions opts;
  opts.claimed_c = Frac(1);
  for (auto _ : state) {
    ExactAllocator alloc;
    benchmark::DoNotOptimize(run(events, alloc, opts).report.total_disruptions);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExactGeometric)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

// Rat = SmallFrac stays within int64 only for small instances; the
// arbitrary-precision variant covers the rest.
template <typename Rat>
void BM_DrfWaterFill(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(7);
  std::vector<Rat> weight(n);
  std::vector<std::vector<Rat>> req(n, std::vector<Rat>(3));
  for (std::size_t j = 0; j < n; ++j) {
    weight[j] = Rat(1 + static_cast<std::int64_t>(uniform_below(rng, 8)));
    for (auto& r : req[j]) r = Rat(1 + static_cast<std::int64_t>(uniform_below(rng, 16)));
  }
  for (auto _ : state) benchmark::DoNotOptimize(drf_water_fill<Rat>(weight, req).lambda);
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_DrfWaterFill<SmallFrac>)->Arg(50)->Arg(100);
BENCHMARK(BM_DrfWaterFill<Frac>)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
