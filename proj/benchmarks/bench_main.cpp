#include <benchmark/benchmark.h>

#include <random>

#include "gaprel/measures.hpp"
#include "gaprel/ruelle.hpp"

using namespace gaprel;

namespace {

struct Setup {
  SpaceModel model;
  PartialFunction h;
  GapStructure gap;
  CocycleTable cocycle;
};

Setup random_setup(std::size_t points, std::size_t depth) {
  std::mt19937_64 rng(points * 7919 + depth);
  std::bernoulli_distribution in_domain(0.9);
  std::uniform_int_distribution<PointId> target(0, static_cast<PointId>(points / 4));
  std::uniform_real_distribution<double> hv(-2.0, 2.0);
  std::vector<std::string> ids;
  std::vector<std::optional<PointId>> sigma(points);
  PartialFunction h(points);
  for (std::size_t x = 0; x < points; ++x) {
    ids.push_back(std::to_string(x));
    if (in_domain(rng)) sigma[x] = target(rng);
    h[x] = hv(rng);
  }
  Setup s{SpaceModel(ids, sigma), h, {}, {}};
  s.gap = gap_from_sigma(s.model, depth);
  s.cocycle = build_cocycle(s.gap, potential_from_h(s.model, s.h, s.gap.depth()));
  return s;
}

void BM_BuildGap(benchmark::State& state) {
  const Setup s = random_setup(static_cast<std::size_t>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(gap_from_sigma(s.model, 8));
}
BENCHMARK(BM_BuildGap)->Arg(50)->Arg(200)->Arg(1000);

void BM_ValidateGap(benchmark::State& state) {
  const Setup s = random_setup(static_cast<std::size_t>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(validate_gap(s.gap));
}
BENCHMARK(BM_ValidateGap)->Arg(50)->Arg(200);

void BM_Calculus(benchmark::State& state) {
  const Setup s = random_setup(static_cast<std::size_t>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(Calculus(s.gap, s.cocycle));
}
BENCHMARK(BM_Calculus)->Arg(200)->Arg(1000);

void BM_MainForQ(benchmark::State& state) {
  const Setup s = random_setup(static_cast<std::size_t>(state.range(0)), 8);
  const Calculus c(s.gap, s.cocycle);
  const Measure mu = construct_qi_on_wn(c, 0);
  for (auto _ : state) benchmark::DoNotOptimize(check_main_for_q(c, mu));
}
BENCHMARK(BM_MainForQ)->Arg(200)->Arg(1000);

void BM_EigenFullShift(benchmark::State& state) {
  const auto fs = full_shift_cylinders(2, static_cast<std::size_t>(state.range(0)), {0.3, -0.2});
  const CocycleTable ct = build_cocycle(fs.gap, fs.potential);
  for (auto _ : state) benchmark::DoNotOptimize(solve_eigenmeasure(fs.transfer, ct));
}
BENCHMARK(BM_EigenFullShift)->Arg(6)->Arg(10);

}  // namespace
BENCHMARK_MAIN();
