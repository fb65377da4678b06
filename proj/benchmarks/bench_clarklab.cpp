#include <benchmark/benchmark.h>

#include "clarklab/clark.hpp"
#include "clarklab/corpus.hpp"
#include "clarklab/counting.hpp"
#include "clarklab/essnorm.hpp"
#include "clarklab/quadrature.hpp"

using namespace clarklab;

static void BM_ClarkAtoms(benchmark::State& state) {
  const Symbol b = random_blaschke(static_cast<int>(state.range(0)), 1);
  const Complex alpha = std::polar(1.0, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(clark_atoms_d1(b, alpha));
}
BENCHMARK(BM_ClarkAtoms)->Arg(2)->Arg(8)->Arg(16);

static void BM_SliceIntegrate(benchmark::State& state) {
  const auto plan = SphereSamplePlan::slice_product(2, static_cast<std::size_t>(state.range(0)), 256, 3);
  const BoundaryFunction f = [](std::span<const Complex> z) { return Complex(std::norm(z[0])); };
  for (auto _ : state) benchmark::DoNotOptimize(slice_integrate(f, plan));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(plan.sample_count));
}
BENCHMARK(BM_SliceIntegrate)->Arg(64)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_AcMassBall2(benchmark::State& state) {
  const Symbol phi = corpus_symbol("half_plus_half_z1_ball2");
  ClarkOptions opt;
  opt.plan = SphereSamplePlan::monte_carlo(2, static_cast<std::size_t>(state.range(0)), 0);
  for (auto _ : state) benchmark::DoNotOptimize(clark_ac_mass(phi, 1.0, opt));
}
BENCHMARK(BM_AcMassBall2)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_SliceCounting(benchmark::State& state) {
  const Symbol phi = random_blaschke(8, 2);
  const std::vector<Complex> zeta{1.0};
  for (auto _ : state) benchmark::DoNotOptimize(slice_counting(phi, zeta, Complex(0.3, -0.2)));
}
BENCHMARK(BM_SliceCounting);

static void BM_StantonIdentity(benchmark::State& state) {
  const Symbol phi = Symbol::power(2);
  const Polynomial f({0.0, 0.5, 0.0, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(stanton_check(f, phi));
}
BENCHMARK(BM_StantonIdentity)->Unit(benchmark::kMillisecond);

static void BM_EssNormIdentity(benchmark::State& state) {
  const auto cfg = EssNormConfig::defaults(1);
  for (auto _ : state) benchmark::DoNotOptimize(essential_norm_report(Symbol::power(1), cfg));
}
BENCHMARK(BM_EssNormIdentity)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK_MAIN();
