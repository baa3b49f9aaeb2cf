#include "implode/dopri.hpp"
#include "implode/integrate.hpp"
#include "implode/limits.hpp"
#include "implode/series.hpp"
#include "implode/shoot.hpp"

#include <benchmark/benchmark.h>

using namespace implode;

static void BM_SonicSeries(benchmark::State& state) {
  const ParamSet p = params_from_R(Real(25.5));
  for (auto _ : state) benchmark::DoNotOptimize(compute_sonic_series(p, static_cast<int>(state.range(0))));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SonicSeries)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_DopriOscillator(benchmark::State& state) {
  using D = Dopri5<long double, 2>;
  D::Options o;
  o.rtol = 1e-15L;
  o.atol = 1e-18L;
  D solver([](long double, const D::State& y) { return D::State{y[1], -y[0]}; }, o);
  for (auto _ : state) benchmark::DoNotOptimize(solver.run(0, {1, 0}, 100));
}
BENCHMARK(BM_DopriOscillator)->Unit(benchmark::kMicrosecond);

static void BM_FarFieldBranch(benchmark::State& state) {
  const ParamSet p = params_from_R(Real(25.5));
  const double tau_star = to_double(p.alpha) / 2;
  IntegrateOptions io;
  io.record = false;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_P6_to_Q2(p, tau_star, io));
}
BENCHMARK(BM_FarFieldBranch)->Unit(benchmark::kMillisecond);

static void BM_MatchingGap(benchmark::State& state) {
  const ParamSet p = params_from_R(Real(25.5));
  const double tau_star = to_double(p.alpha) / 2;
  for (auto _ : state) benchmark::DoNotOptimize(matching_gap(p, tau_star));
}
BENCHMARK(BM_MatchingGap)->Unit(benchmark::kMillisecond);

static void BM_SInfinity(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(s_infinity(static_cast<int>(state.range(0))));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SInfinity)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK_MAIN();
