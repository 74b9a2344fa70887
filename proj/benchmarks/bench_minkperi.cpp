#include <benchmark/benchmark.h>

#include "minkperi/convex_geometry.hpp"
#include "minkperi/grid_geometry.hpp"
#include "minkperi/optimizer.hpp"
#include "minkperi/riesz.hpp"

namespace minkperi {
namespace {

void BM_DistanceTransform(benchmark::State& state) {
  const double h = 2.0 / static_cast<double>(state.range(0));
  const auto disk = rasterize_ball(2, {0, 0, 0}, 1.0, h);
  for (auto _ : state) benchmark::DoNotOptimize(distance_transform(disk));
  state.SetComplexityN(static_cast<int64_t>(disk.geometry().size()));
}
BENCHMARK(BM_DistanceTransform)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond);

void BM_GridPerimeter(benchmark::State& state) {
  const double h = 2.0 / static_cast<double>(state.range(0));
  const auto disk = rasterize_ball(2, {0, 0, 0}, 1.0, h);
  for (auto _ : state) benchmark::DoNotOptimize(minkowski_perimeter(disk, 0.1));
}
BENCHMARK(BM_GridPerimeter)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond);

void BM_RieszFast(benchmark::State& state) {
  const double h = 2.0 / static_cast<double>(state.range(0));
  const auto disk = rasterize_ball(2, {0, 0, 0}, 1.0, h);
  const auto kernel = RieszKernel::make(2, 1.0, h);
  for (auto _ : state) benchmark::DoNotOptimize(riesz_energy_fast(disk, kernel));
}
BENCHMARK(BM_RieszFast)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

void BM_RieszPolygon(benchmark::State& state) {
  const auto poly = regular_polygon(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(riesz_energy_polygon(poly, 0.5, 1e-7));
}
BENCHMARK(BM_RieszPolygon)->RangeMultiplier(4)->Range(8, 128)->Unit(benchmark::kMillisecond);

void BM_AnnealingSteps(benchmark::State& state) {
  OptimizerConfig cfg;
  cfg.m = 1e-2;
  cfg.steps = static_cast<std::size_t>(state.range(0));
  cfg.restarts = 1;
  for (auto _ : state) benchmark::DoNotOptimize(minimize(cfg).best_energy);
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_AnnealingSteps)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace minkperi

BENCHMARK_MAIN();
