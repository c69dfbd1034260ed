#include <benchmark/benchmark.h>

#include "gevrey/datum.hpp"
#include "gevrey/random_fields.hpp"
#include "gevrey/solver.hpp"
#include "gevrey/spectral_ops.hpp"

using namespace gevrey;

namespace {

SpectralField datum(int N) {
  DatumSpec d;
  d.kind = "random_div_free";
  d.seed = 1;
  return init_data(Grid{2, N}, d);
}

void BM_RoundTrip(benchmark::State& st) {
  const auto u = datum(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(forward_transform(inverse_transform(u)));
}
BENCHMARK(BM_RoundTrip)->Arg(64)->Arg(128)->Arg(256);

void BM_NonlinearTerm(benchmark::State& st) {
  const auto u = datum(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(nonlinear_term(u));
}
BENCHMARK(BM_NonlinearTerm)->Arg(64)->Arg(128)->Arg(256);

void BM_Step(benchmark::State& st) {
  const auto u = datum(64);
  auto cfg = scheme_config(Scheme::Besov, 2);
  cfg.T = 0.01;
  cfg.dt = 1e-3;
  cfg.n_records = 1;
  for (auto _ : st) benchmark::DoNotOptimize(step_solve(u, cfg));
}
BENCHMARK(BM_Step)->Unit(benchmark::kMillisecond);

void BM_BesovNorm(benchmark::State& st) {
  const auto u = datum(static_cast<int>(st.range(0)));
  const auto& sys = dyadic_for(u.grid);
  for (auto _ : st) benchmark::DoNotOptimize(besov_norm(u, 0.5, 4.0, 1.0, sys));
}
BENCHMARK(BM_BesovNorm)->Arg(64)->Arg(128);

void BM_ModulationNorm(benchmark::State& st) {
  const auto u = datum(static_cast<int>(st.range(0)));
  const auto& sys = uniform_for(u.grid);
  for (auto _ : st) benchmark::DoNotOptimize(modulation_norm(u, 0.0, 2.0, 1.0, sys));
}
BENCHMARK(BM_ModulationNorm)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
