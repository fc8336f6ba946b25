#include <benchmark/benchmark.h>

#include <sdwave/diagonalization.hpp>
#include <sdwave/gevrey.hpp>
#include <sdwave/lattice.hpp>
#include <sdwave/spectral_solver.hpp>

#include <cmath>

using namespace sdwave;

namespace {

LatticeField box_field(int dim, int width) {
  LatticeField f(dim);
  for (int i = 0; i < width; ++i) {
    for (int j = 0; j < (dim >= 2 ? width : 1); ++j) {
      f.set({i, dim >= 2 ? j : 0, 0}, Complex(1.0 / (1 + i + j), 0.5));
    }
  }
  return f;
}

SpeedProfile example37() {
  Example1Params e;
  e.p = 0.0;
  e.q = 0.5;
  e.m = 3;
  return SpeedProfile::example1(e);
}

}  // namespace

static void BM_Dtft(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const LatticeField f = box_field(dim, 16);
  const double theta[] = {0.3, -1.1};
  for (auto _ : state) benchmark::DoNotOptimize(dtft(f, std::span<const double>(theta, static_cast<std::size_t>(dim))));
}
BENCHMARK(BM_Dtft)->Arg(1)->Arg(2);

static void BM_SampleMode(benchmark::State& state) {
  const SpeedProfile prof = example37();
  const auto times = sample_schedule(static_cast<double>(state.range(0)), 16);
  const FrequencyPoint f = FrequencyPoint::from_xi_norm(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_mode(prof, f, {Complex(1.0), Complex(0.0)}, times));
}
BENCHMARK(BM_SampleMode)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_Simulate64(benchmark::State& state) {
  const SpeedProfile prof = SpeedProfile::constant({1.5, 1});
  const LatticeField u0 = box_field(1, 4);
  const LatticeField u1 = box_field(1, 4);
  const auto times = sample_schedule(100.0, 16);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(prof, u0, u1, TorusGrid(1, 64), times, {}));
}
BENCHMARK(BM_Simulate64)->Unit(benchmark::kMillisecond);

static void BM_DiagChain(benchmark::State& state) {
  const SpeedProfile prof = example37();
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_chain(prof, 0.7, 300.0, m));
}
BENCHMARK(BM_DiagChain)->Arg(1)->Arg(2)->Arg(3);

static void BM_AssociatedFunction(benchmark::State& state) {
  const auto seq = LogConvexSequence::factorial_power(1.5);
  const double tau = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(associated_function(seq, tau));
}
BENCHMARK(BM_AssociatedFunction)->Arg(10)->Arg(10000);

static void BM_LConstant(benchmark::State& state) {
  const SpeedProfile prof = example37();
  const auto seq = LogConvexSequence::factorial_power(1.5);
  for (auto _ : state) benchmark::DoNotOptimize(L_constant(4.0, seq, prof));
}
BENCHMARK(BM_LConstant)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
