#include <benchmark/benchmark.h>

#include "walras/demand.hpp"
#include "walras/equilibrium.hpp"
#include "walras/excess.hpp"

namespace {

using namespace walras;

Economy edgeworth() {
  std::vector<Agent> agents;
  agents.emplace_back(UtilityFunction::cobb_douglas({0.6, 0.4}), Bundle({1.0, 0.0}));
  agents.emplace_back(UtilityFunction::cobb_douglas({0.6, 0.4}), Bundle({0.0, 1.0}));
  return Economy({"x", "y"}, std::move(agents));
}

Economy leontief_four_goods() {
  std::vector<Agent> agents;
  agents.emplace_back(UtilityFunction::leontief({1.0, 2.0, 1.0, 0.5}),
                      Bundle({1.0, 1.0, 1.0, 1.0}));
  agents.emplace_back(UtilityFunction::leontief({0.5, 1.0, 2.0, 1.0}),
                      Bundle({1.0, 1.0, 1.0, 1.0}));
  agents.emplace_back(UtilityFunction::ces({0.25, 0.25, 0.25, 0.25}, 0.5),
                      Bundle({1.0, 1.0, 1.0, 1.0}));
  return Economy({"a", "b", "c", "d"}, std::move(agents));
}

void BM_DemandCobbDouglas(benchmark::State& state) {
  const Economy econ = edgeworth();
  const PriceVector p({0.55, 0.45});
  for (auto _ : state) {
    benchmark::DoNotOptimize(demand(econ, 0, p));
  }
}
BENCHMARK(BM_DemandCobbDouglas);

void BM_DemandLeontief(benchmark::State& state) {
  const Economy econ = leontief_four_goods();
  const PriceVector p({0.25, 0.25, 0.25, 0.25});
  for (auto _ : state) {
    benchmark::DoNotOptimize(demand(econ, 0, p));
  }
}
BENCHMARK(BM_DemandLeontief);

void BM_ExcessDemand(benchmark::State& state) {
  const Economy econ = leontief_four_goods();
  const PriceVector p({0.3, 0.2, 0.3, 0.2});
  for (auto _ : state) {
    benchmark::DoNotOptimize(excess_demand(econ, p));
  }
}
BENCHMARK(BM_ExcessDemand);

void BM_PriceAdjust(benchmark::State& state) {
  const ExcessVector z({0.4, -0.2, 0.4, -0.6});
  for (auto _ : state) {
    benchmark::DoNotOptimize(price_adjust(z));
  }
}
BENCHMARK(BM_PriceAdjust);

void BM_GridSolveEdgeworth(benchmark::State& state) {
  const Economy econ = edgeworth();
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_equilibrium_grid(econ, 1e-3, 8));
  }
}
BENCHMARK(BM_GridSolveEdgeworth)->Unit(benchmark::kMillisecond);

void BM_TatonnementWalk(benchmark::State& state) {
  const Economy econ = edgeworth();
  const PriceVector start({0.9, 0.1});
  for (auto _ : state) {
    benchmark::DoNotOptimize(tatonnement(econ, start, 0.1, 50, 1e-9));
  }
}
BENCHMARK(BM_TatonnementWalk)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
