#include "isopath/cloud.hpp"
#include "isopath/synthetic.hpp"
#include "isopath/weights.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace isopath;

const SyntheticCloud& bench_cloud() {
    static SyntheticCloud syn = plane_grid(100, 100, 1.0, 0.2);
    return syn;
}

void bm_laplacian(benchmark::State& state, Execution exec) {
    const PointCloud& cloud = bench_cloud().cloud;
    for (auto _ : state) {
        WeightSet w = build_laplacian(cloud, kDefaultNeighborhoodSize, exec);
        benchmark::DoNotOptimize(w);
    }
}

void bm_normals(benchmark::State& state, Execution exec) {
    for (auto _ : state) {
        PointCloud cloud = bench_cloud().cloud; // fresh copy, normals dropped
        compute_normals(cloud, kDefaultNeighborhoodSize, exec);
        benchmark::DoNotOptimize(cloud);
    }
}

BENCHMARK_CAPTURE(bm_laplacian, serial, Execution::Serial);
BENCHMARK_CAPTURE(bm_laplacian, parallel, Execution::Parallel);
BENCHMARK_CAPTURE(bm_normals, serial, Execution::Serial);
BENCHMARK_CAPTURE(bm_normals, parallel, Execution::Parallel);

} // namespace

BENCHMARK_MAIN();
