#include <benchmark/benchmark.h>

#include "topoforge/deepsets.hpp"
#include "topoforge/filtration.hpp"
#include "topoforge/persistence.hpp"
#include "topoforge/rng.hpp"

using namespace topoforge;

namespace {

PointCloud random_cloud(int n, uint64_t seed) {
  Rng rng(seed);
  PointCloud cloud;
  for (int i = 0; i < n; ++i) cloud.push_back({rng.uniform(), rng.uniform()});
  return cloud;
}

void BM_RipsConstruction(benchmark::State& state) {
  PointCloud cloud = random_cloud(static_cast<int>(state.range(0)), 1);
  double radius = default_max_radius(cloud);
  for (auto _ : state) {
    FilteredComplex complex = rips_filtration(cloud, 2, radius);
    benchmark::DoNotOptimize(complex.entries.data());
  }
}
BENCHMARK(BM_RipsConstruction)->Arg(50)->Arg(100)->Arg(200);

void BM_Reduction(benchmark::State& state) {
  PointCloud cloud = random_cloud(static_cast<int>(state.range(0)), 2);
  FilteredComplex complex = rips_filtration(cloud, 2, default_max_radius(cloud));
  for (auto _ : state) {
    PersistenceDiagram d = compute_persistence(complex, 1);
    benchmark::DoNotOptimize(d.points.data());
  }
}
BENCHMARK(BM_Reduction)->Arg(50)->Arg(100)->Arg(200);

void BM_RipsNetForward(benchmark::State& state) {
  PointCloud cloud = random_cloud(static_cast<int>(state.range(0)), 3);
  RipsNetModel model = make_preset("synth-mean", 2, 250, 4);
  for (auto _ : state) {
    std::vector<double> out = forward(model, cloud);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_RipsNetForward)->Arg(100)->Arg(300);

}  // namespace

BENCHMARK_MAIN();
