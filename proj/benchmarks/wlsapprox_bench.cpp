#include <benchmark/benchmark.h>

#include <cmath>

#include "wlsapprox/complexity.hpp"
#include "wlsapprox/sampler.hpp"
#include "wlsapprox/spectral_model.hpp"
#include "wlsapprox/wls.hpp"

using namespace wlsapprox;

namespace {

ProblemInstance legendre2() {
  return ProblemInstance(BasisKind::legendre, WeightFamily::algebraic(1.0), 2, 400);
}

void BM_EnumerateEigenvalues(benchmark::State& state) {
  const auto M = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(enumerate_eigenvalues(WeightFamily::algebraic(1.0), 4, M));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EnumerateEigenvalues)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_DrawNodes(benchmark::State& state) {
  const auto inst = legendre2();
  const SamplingDensity density(inst, static_cast<std::size_t>(state.range(0)));
  RandomStream s(1);
  for (auto _ : state) benchmark::DoNotOptimize(draw_nodes(density, 1024, s));
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_DrawNodes)->Arg(4)->Arg(16)->Arg(64);

void BM_AssembleAndSolve(benchmark::State& state) {
  const auto inst = legendre2();
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto n = 64 * m;
  RandomStream s(2);
  const auto acc = draw_accepted(inst, m, n, s);
  const auto f = CoefficientFunction::unit_mode(inst.spectral(), m + 1);
  const auto values = sample_values(inst, f, acc.sample);
  for (auto _ : state) benchmark::DoNotOptimize(solve(inst, m, acc.sample, values));
}
BENCHMARK(BM_AssembleAndSolve)->Arg(8)->Arg(32)->Arg(64);

void BM_NWor(benchmark::State& state) {
  const auto spectral = enumerate_eigenvalues(WeightFamily::algebraic(1.0), 3, 100000);
  double eps = 1e-1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(n_wor(spectral, eps, Criterion::normalized));
    eps = eps < 1e-3 ? 1e-1 : eps * 0.97;
  }
}
BENCHMARK(BM_NWor);

}  // namespace
BENCHMARK_MAIN();
