#include <benchmark/benchmark.h>

#include "jensen/classic_bounds.hpp"
#include "jensen/oracle.hpp"
#include "jensen/refined_bounds.hpp"
#include "jensen/uniform_convex.hpp"

using namespace jensen;

namespace {

Instance instance_of_size(std::size_t n) {
  FuzzConfig cfg;
  cfg.n_min = cfg.n_max = n;
  cfg.mode = WeightMode::BoundedPositive;
  return random_instance(cfg, 0);
}

void BM_JensenFunctional(benchmark::State& state) {
  const auto inst = instance_of_size(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(jensen_functional(inst.f(), inst.x(), inst.p()));
}
BENCHMARK(BM_JensenFunctional)->Arg(2)->Arg(8)->Arg(32);

void BM_RatioSandwich(benchmark::State& state) {
  const auto inst = instance_of_size(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ratio_sandwich(inst));
}
BENCHMARK(BM_RatioSandwich)->Arg(2)->Arg(8)->Arg(32);

void BM_PrefixRatioSandwich(benchmark::State& state) {
  const auto inst = instance_of_size(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(prefix_ratio_sandwich(inst));
}
BENCHMARK(BM_PrefixRatioSandwich)->Arg(2)->Arg(8)->Arg(32);

void BM_Certification(benchmark::State& state) {
  CertGrid grid;
  grid.x_points = grid.y_points = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(certify_uniform_convexity(FunctionSpec::exp(), ModulusSpec(0.25L, 2), {0, 1}, grid));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.x_points * grid.y_points * grid.t_points));
}
BENCHMARK(BM_Certification)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_MergedChain(benchmark::State& state) {
  const auto base = instance_of_size(static_cast<std::size_t>(state.range(0))).sorted();
  const ModulusSpec phi(0.125L, 2);
  const auto cert = certify_uniform_convexity(base.f(), phi, base.interval());
  const auto inst = base.with_phi(phi);
  for (auto _ : state) benchmark::DoNotOptimize(merged_chain_refinement(inst, cert));
}
BENCHMARK(BM_MergedChain)->Arg(2)->Arg(8)->Arg(32);

void BM_Campaign(benchmark::State& state) {
  FuzzConfig cfg;
  cfg.trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_campaign(cfg, all_checks()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Campaign)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
