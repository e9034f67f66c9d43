#include <benchmark/benchmark.h>

#include <vector>

#include "lgf/asymptotics.hpp"
#include "lgf/green_lattice.hpp"
#include "lgf/mc_oracle.hpp"
#include "lgf/sweep.hpp"

namespace {

using lgf::lattice::Coord;

lgf::lattice::kernels::GridSpec grid_spec(int n) {
    lgf::lattice::kernels::GridSpec g;
    g.d = 3;
    g.n = n;
    g.shift = 0.09;
    g.q = 1.0;
    return g;
}

void BM_FourierGridSerial(benchmark::State& state) {
    const auto g = grid_spec(static_cast<int>(state.range(0)));
    const std::vector<Coord> x{1, 1, 0};
    for (auto _ : state) benchmark::DoNotOptimize(lgf::lattice::kernels::fourier_grid_sum_serial(g, x));
}

void BM_FourierGridOmp(benchmark::State& state) {
    const auto g = grid_spec(static_cast<int>(state.range(0)));
    const std::vector<Coord> x{1, 1, 0};
    for (auto _ : state) benchmark::DoNotOptimize(lgf::lattice::kernels::fourier_grid_sum_omp(g, x));
}

lgf::mc::WalkConfig walk_config() {
    lgf::mc::WalkConfig c;
    c.d = 3;
    c.a = 0.3;
    c.n_walks = 100000;
    c.seed = 7;
    return c;
}

void BM_WalksSerial(benchmark::State& state) {
    const auto c = walk_config();
    for (auto _ : state) benchmark::DoNotOptimize(lgf::mc::run_killed_walks_serial(c));
}

void BM_WalksOmp(benchmark::State& state) {
    const auto c = walk_config();
    for (auto _ : state) benchmark::DoNotOptimize(lgf::mc::run_killed_walks_omp(c));
}

std::vector<std::vector<Coord>> sweep_points() {
    std::vector<std::vector<Coord>> pts;
    for (Coord i = 0; i <= 4; ++i)
        for (Coord j = i; j <= 4; ++j) pts.push_back({i, j, 4});
    return pts;
}

double bessel_at(const std::vector<Coord>& x) { return lgf::lattice::green_bessel({3, 0.25, 1.0}, x).value; }

void BM_BesselSweepSerial(benchmark::State& state) {
    const auto pts = sweep_points();
    for (auto _ : state) benchmark::DoNotOptimize(lgf::sweep::map_serial(pts, bessel_at));
}

void BM_BesselSweepOmp(benchmark::State& state) {
    const auto pts = sweep_points();
    for (auto _ : state) benchmark::DoNotOptimize(lgf::sweep::map_omp(pts, bessel_at));
}

}  // namespace

BENCHMARK(BM_FourierGridSerial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FourierGridOmp)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WalksSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WalksOmp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BesselSweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BesselSweepOmp)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
