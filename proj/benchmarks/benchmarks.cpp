// Apache License, Version 2.0, refer to LICENSE.txt
#include <benchmark/benchmark.h>

#include "metamix/datasets.hpp"
#include "metamix/model_space.hpp"
#include "metamix/sim.hpp"

using namespace metamix;

namespace {

AnalysisConfig default_config() {
  AnalysisConfig cfg;
  cfg.model_prior = {0.5, 0.0, 0.0, 0.5};
  return cfg;
}

void BM_StandaloneFit(benchmark::State& state) {
  const Dataset data = filter_group(escalc_dataset(migraine_tables()), "adolescents");
  const AnalysisConfig cfg = default_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fit(data, cfg.effect_prior, cfg.heterogeneity_prior).log_marginal);
  }
}
BENCHMARK(BM_StandaloneFit);

void BM_TwoComponentAnalysis(benchmark::State& state) {
  const Dataset all = escalc_dataset(migraine_tables());
  const Dataset source = filter_group(all, "adolescents");
  const Dataset target = filter_group(all, "children");
  const AnalysisConfig cfg = default_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(analyze(source, target, cfg).posterior_prob[0]);
  }
}
BENCHMARK(BM_TwoComponentAnalysis);

void BM_EffectPoolingFit(benchmark::State& state) {
  const Dataset all = escalc_dataset(migraine_tables());
  const Dataset source = filter_group(all, "adolescents");
  const Dataset target = filter_group(all, "children");
  const AnalysisConfig cfg = default_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_m2(source, target, cfg).log_marginal);
  }
}
BENCHMARK(BM_EffectPoolingFit);

void BM_ShortestInterval(benchmark::State& state) {
  const Dataset all = escalc_dataset(migraine_tables());
  const Dataset source = filter_group(all, "adolescents");
  const Dataset target = filter_group(all, "children");
  const AnalysisResult res = analyze(source, target, default_config());
  for (auto _ : state) {
    benchmark::DoNotOptimize(res.pooled.shortest_interval(0.95).width());
  }
}
BENCHMARK(BM_ShortestInterval);

void BM_SimulationRep(benchmark::State& state) {
  const Scenario sc = builtin_scenario("S1");
  const AnalysisConfig cfg = default_config();
  std::uint64_t rep = 0;
  for (auto _ : state) {
    const auto [source, target] = generate_dataset(sc, 1, rep++);
    const AnalysisResult res = analyze(source, target, cfg);
    benchmark::DoNotOptimize(res.pooled.shortest_interval(0.95).width());
  }
}
BENCHMARK(BM_SimulationRep);

}  // namespace

BENCHMARK_MAIN();
