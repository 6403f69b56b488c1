#include <benchmark/benchmark.h>

#include <random>

#include "netcox/covariance.hpp"
#include "netcox/gp_sim.hpp"
#include "netcox/inference.hpp"
#include "netcox/metrics.hpp"
#include "netcox/network.hpp"
#include "netcox/rng.hpp"

using namespace netcox;

namespace {

LinearNetwork balanced_tree(int depth) {
    // complete binary tree, layered layout so the drawing cannot self-cross
    std::vector<Vec2> vs{{0.5 * (1 << depth), 0.0}};
    std::vector<Segment> segs;
    std::vector<int> frontier{0};
    for (int d = 1; d <= depth; ++d) {
        std::vector<int> next;
        double slot = static_cast<double>(1 << (depth - d));
        int i = 0;
        for (int v : frontier) {
            for (int c = 0; c < 2; ++c, ++i) {
                int nid = static_cast<int>(vs.size());
                vs.push_back({(i + 0.5) * slot, static_cast<double>(d)});
                segs.push_back({v, nid, 1.0, ""});
                next.push_back(nid);
            }
        }
        frontier = std::move(next);
    }
    return LinearNetwork::build(std::move(vs), std::move(segs));
}

void BM_EigSimulate(benchmark::State& state) {
    LinearNetwork net = balanced_tree(5);
    NetworkGrid grid = make_grid(net, net.totalLength() / state.range(0));
    MetricEngine eng(net, MetricKind::Resistance);
    IsotropicCovariance cov;
    cov.family = CorrelationFamily::exponential(0.1);
    EigGridSimulator sim(cov, grid, eng);
    RngStream streams(1);
    auto rng = streams.stream();
    for (auto _ : state) benchmark::DoNotOptimize(sim.simulate(rng).values.sum());
    state.counters["grid"] = grid.size();
}
BENCHMARK(BM_EigSimulate)->Arg(200)->Arg(900)->Arg(1800);

void BM_TreeMarkovSimulate(benchmark::State& state) {
    LinearNetwork net = balanced_tree(5);
    NetworkGrid grid = make_grid(net, net.totalLength() / state.range(0));
    TreeMarkovSimulator sim(grid, 1.0, 0.1);
    RngStream streams(1);
    auto rng = streams.stream();
    for (auto _ : state) benchmark::DoNotOptimize(sim.simulate(rng).values.sum());
    state.counters["grid"] = grid.size();
}
BENCHMARK(BM_TreeMarkovSimulate)->Arg(200)->Arg(900)->Arg(1800);

void BM_EigSetup(benchmark::State& state) {
    LinearNetwork net = balanced_tree(5);
    NetworkGrid grid = make_grid(net, net.totalLength() / state.range(0));
    MetricEngine eng(net, MetricKind::Resistance);
    IsotropicCovariance cov;
    cov.family = CorrelationFamily::exponential(0.1);
    for (auto _ : state) {
        EigGridSimulator sim(cov, grid, eng);
        benchmark::DoNotOptimize(sim.maxEigenvalue());
    }
}
BENCHMARK(BM_EigSetup)->Arg(200)->Arg(900);

void BM_ResistanceDistance(benchmark::State& state) {
    std::mt19937_64 rng(7);
    LinearNetwork net = balanced_tree(6);
    auto rs = ResistanceStructure::build(net);
    std::uniform_int_distribution<int> seg(0, net.numSegments() - 1);
    std::uniform_real_distribution<double> off(0.0, 1.0);
    for (auto _ : state) {
        NetPoint u{seg(rng), off(rng)};
        NetPoint v{seg(rng), off(rng)};
        benchmark::DoNotOptimize(rs.distance(u, v));
    }
}
BENCHMARK(BM_ResistanceDistance);

void BM_PcfEstimate(benchmark::State& state) {
    LinearNetwork net = balanced_tree(5);
    MetricEngine eng(net, MetricKind::Geodesic);
    IntensityModel intensity = IntensityModel::constant(state.range(0) / net.totalLength());
    RngStream streams(3);
    auto rng = streams.stream();
    PointPattern pat = simulate_poisson(intensity, net, rng);
    std::vector<double> rGrid = uniform_grid(0.0, 5.0, 128);
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_pcf(pat, eng, intensity, rGrid, 0.2).y.back());
    state.counters["points"] = pat.size();
}
BENCHMARK(BM_PcfEstimate)->Arg(200)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
