#include "reeb/clarke_dual.hpp"
#include "reeb/ellipsoid.hpp"
#include "reeb/reeb_dynamics.hpp"

#include <benchmark/benchmark.h>

namespace {

using reeb::Execution;

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_BesseTest(benchmark::State& state) {
  const auto body = reeb::ConvexBody::ellipsoid({1.0, 2.0});
  for (auto _ : state) benchmark::DoNotOptimize(reeb::numerical_besse_test(body, 2.0, 2000, mode(state)));
  label(state);
}
BENCHMARK(BM_BesseTest)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_OrbitSearch(benchmark::State& state) {
  const auto body = reeb::ConvexBody::perturbed({1.0, 2.0}, 1e-3, {1.0, 1.0});
  reeb::OrbitSearchOptions opts;
  opts.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(reeb::find_closed_orbits(body, opts));
  label(state);
}
BENCHMARK(BM_OrbitSearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ClarkeMinimize(benchmark::State& state) {
  const auto body = reeb::ConvexBody::ellipsoid({1.0, 2.0});
  reeb::ClarkeConfig cfg;
  cfg.modes = 32;
  cfg.random_starts = 4;
  cfg.doubling_check = false;
  cfg.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(reeb::minimize(body, cfg));
  label(state);
}
BENCHMARK(BM_ClarkeMinimize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ExactSpectrum(benchmark::State& state) {
  const auto e = reeb::Ellipsoid::parse({"3/2", "7/3", "11/5"});
  for (auto _ : state) benchmark::DoNotOptimize(reeb::action_spectrum(e, 200.0));
}
BENCHMARK(BM_ExactSpectrum)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
