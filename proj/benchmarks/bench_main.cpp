#include <benchmark/benchmark.h>

#include "tpa/antivoter.hpp"
#include "tpa/bounds.hpp"
#include "tpa/models.hpp"
#include "tpa/stein.hpp"

using namespace tpa;

static void BM_TpWindow(benchmark::State& state) {
  const TpParams p = make_tp(static_cast<double>(state.range(0)), static_cast<double>(state.range(0)) / 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(tp_window(p));
}
BENCHMARK(BM_TpWindow)->Arg(10)->Arg(1000)->Arg(100000);

// Full singleton sweep at one rate: shared table, one solve per point.
static void BM_SteinSweep(benchmark::State& state) {
  const double rate = static_cast<double>(state.range(0));
  const long window = default_stein_window(rate);
  for (auto _ : state) {
    const PoissonTable table(rate, window);
    double acc = 0.0;
    for (long i = 0; i <= window; ++i) acc += sup_norms(solve_stein(table, {i})).g_sup;
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_SteinSweep)->Arg(4)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_PoissonBinomialPair(benchmark::State& state) {
  std::vector<double> p(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = 0.05 + 0.9 * static_cast<double>(i) / static_cast<double>(p.size());
  for (auto _ : state) benchmark::DoNotOptimize(build_poisson_binomial({p}));
}
BENCHMARK(BM_PoissonBinomialPair)->Arg(20)->Arg(200)->Unit(benchmark::kMicrosecond);

static void BM_FullReport(benchmark::State& state) {
  const PairModel m = build_hypergeometric({60, 30, 30});
  for (auto _ : state) benchmark::DoNotOptimize(full_report(m));
}
BENCHMARK(BM_FullReport)->Unit(benchmark::kMicrosecond);

static void BM_ExactStationary(benchmark::State& state) {
  const Graph g = complete_graph(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(exact_stationary(g));
}
BENCHMARK(BM_ExactStationary)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_McmcSteps(benchmark::State& state) {
  const Graph g = petersen_graph();
  for (auto _ : state) benchmark::DoNotOptimize(mcmc_estimate(g, McmcOptions{100'000, 1'000, 1, 3}));
  state.SetItemsProcessed(state.iterations() * 100'000);
}
BENCHMARK(BM_McmcSteps)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
