#include <benchmark/benchmark.h>

#include "potcap/capacities.hpp"
#include "potcap/entanglement.hpp"
#include "potcap/entropics.hpp"
#include "potcap/potential.hpp"
#include "potcap/structure.hpp"
#include "potcap/zoo.hpp"

using namespace potcap;

static void BM_Entropy(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Matrix rho = random_density(SystemDims::single("A", d), 1).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(entropy(rho));
}
BENCHMARK(BM_Entropy)->Arg(4)->Arg(16)->Arg(64);

static void BM_PartialTrace(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Matrix m = random_gaussian(d * d, d * d, 2);
  for (auto _ : state) benchmark::DoNotOptimize(trace_out_right(m, d, d));
}
BENCHMARK(BM_PartialTrace)->Arg(2)->Arg(4)->Arg(8);

static void BM_Capacity(benchmark::State& state, const char* quantity) {
  const auto ch = random_channel(2, 2, 3, 3);
  CapacityOptions o;
  o.optim.restarts = 4;
  for (auto _ : state) benchmark::DoNotOptimize(compute_capacity(quantity, ch, o).value);
}
BENCHMARK_CAPTURE(BM_Capacity, chi, "chi")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Capacity, q1, "q1")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Capacity, p1, "p1")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Capacity, c_e, "c_e")->Unit(benchmark::kMillisecond);

static void BM_EntanglementOfFormation(benchmark::State& state) {
  const Matrix rho = random_density(SystemDims({"B", "E"}, {2, 2}), 4).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(entanglement_of_formation(rho, 2, 2).value);
}
BENCHMARK(BM_EntanglementOfFormation)->Unit(benchmark::kMillisecond);

static void BM_CArrow(benchmark::State& state) {
  const Matrix rho = random_density(SystemDims({"B", "E"}, {2, 2}), 5).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(c_arrow(rho, 2, 2).value);
}
BENCHMARK(BM_CArrow)->Unit(benchmark::kMillisecond);

static void BM_ChannelEof(benchmark::State& state) {
  const auto ch = amplitude_damping_channel(0.3);
  for (auto _ : state) benchmark::DoNotOptimize(channel_eof(ch).value);
}
BENCHMARK(BM_ChannelEof)->Unit(benchmark::kMillisecond)->Iterations(3);

static void BM_BlockDiscovery(benchmark::State& state) {
  const auto bd = random_block_decomposition(4, 2, 6);
  const Matrix rho = construct_block_state(bd).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(discover_block_form(rho, 4, 2).status);
}
BENCHMARK(BM_BlockDiscovery)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
