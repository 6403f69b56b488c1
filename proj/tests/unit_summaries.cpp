#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "netcox/summaries.hpp"

using namespace netcox;

TEST_CASE("empty space function on a single point") {
    auto net = fixtures::single_segment(1.0);
    PointPattern pat;
    pat.net = &net;
    pat.points = {{0, 0.5}};
    MetricEngine eng(net, MetricKind::Geodesic);
    auto grid = make_grid(net, 0.1);
    std::vector<double> rGrid = uniform_grid(0.0, 0.6, 13);
    // G needs two points; add a far twin
    pat.points.push_back({0, 0.0});
    FGJResult f = empirical_fgj(pat, eng, grid.points, rGrid);
    // every location is within 0.5 of some point
    CHECK(f.F.y.back() == doctest::Approx(1.0));
    for (size_t k = 0; k + 1 < rGrid.size(); ++k) CHECK(f.F.y[k] <= f.F.y[k + 1] + 1e-12);
}

TEST_CASE("nearest neighbour function jumps at the pair distance") {
    auto net = fixtures::single_segment(10.0);
    PointPattern pat;
    pat.net = &net;
    pat.points = {{0, 2.0}, {0, 5.0}};
    MetricEngine eng(net, MetricKind::Geodesic);
    auto grid = make_grid(net, 0.5);
    std::vector<double> rGrid = {1.0, 2.9, 3.1, 6.0};
    FGJResult f = empirical_fgj(pat, eng, grid.points, rGrid);
    CHECK(f.G.y[0] == doctest::Approx(0.0));
    CHECK(f.G.y[1] == doctest::Approx(0.0));
    CHECK(f.G.y[2] == doctest::Approx(1.0));  // both nearest neighbours at distance 3
    CHECK(f.G.y[3] == doctest::Approx(1.0));
}

TEST_CASE("J is one for sparse independent points and undefined when F saturates") {
    auto net = fixtures::y_tree(4.0, 4.0, 4.0);
    MetricEngine eng(net, MetricKind::Geodesic);
    auto grid = make_grid(net, 0.25);
    RngStream streams(91);
    auto intensity = IntensityModel::constant(1.5);
    std::vector<double> rGrid = uniform_grid(0.0, 6.0, 25);
    std::vector<double> sumF(rGrid.size(), 0.0), sumG(rGrid.size(), 0.0);
    std::vector<double> sumJ(rGrid.size(), 0.0);
    std::vector<int> cnt(rGrid.size(), 0), cntJ(rGrid.size(), 0);
    for (int rep = 0; rep < 300; ++rep) {
        auto rng = streams.stream(rep);
        PointPattern pat = simulate_poisson(intensity, *&net, rng);
        if (pat.size() < 2) continue;
        FGJResult f = empirical_fgj(pat, eng, intensity, grid.points, rGrid);
        for (size_t k = 0; k < rGrid.size(); ++k) {
            sumF[k] += f.F.y[k];
            sumG[k] += f.G.y[k];
            ++cnt[k];
            if (!f.jDefined[k]) continue;
            sumJ[k] += f.J.y[k];
            ++cntJ[k];
        }
    }
    // Poisson: mean G matches mean F pointwise; the J ratio itself is only
    // checked at small radii where its denominator is well away from zero
    for (size_t k = 0; k < rGrid.size(); ++k) {
        if (rGrid[k] > 2.0 || cnt[k] < 250) continue;
        CHECK(sumG[k] / cnt[k] == doctest::Approx(sumF[k] / cnt[k]).epsilon(0.05));
    }
    for (size_t k = 0; k < rGrid.size(); ++k) {
        if (rGrid[k] > 0.5 || rGrid[k] == 0.0 || cntJ[k] < 250) continue;
        CHECK(sumJ[k] / cntJ[k] == doctest::Approx(1.0).epsilon(0.15));
    }
}

TEST_CASE("extreme data curves get small envelope p-values") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int s = 99, m = 40;
    std::vector<std::vector<double>> sims(s, std::vector<double>(m));
    for (auto& c : sims)
        for (auto& v : c) v = normal(rng);
    std::vector<double> extreme(m, 8.0);
    auto res = global_envelope_erl(extreme, sims);
    CHECK(res.pvalue == doctest::Approx(1.0 / (s + 1)));
    CHECK(res.reject);

    std::vector<double> typical(m);
    for (auto& v : typical) v = normal(rng);
    auto res2 = global_envelope_erl(typical, sims);
    CHECK(res2.pvalue > 0.05);
    CHECK_FALSE(res2.reject);
    for (int k = 0; k < m; ++k) CHECK(res2.lo[k] <= res2.hi[k]);
}

TEST_CASE("envelope band contains the central simulated curves") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int s = 199, m = 25;
    std::vector<std::vector<double>> sims(s, std::vector<double>(m));
    for (auto& c : sims)
        for (auto& v : c) v = normal(rng);
    std::vector<double> data(m);
    for (auto& v : data) v = normal(rng);
    auto res = global_envelope_erl(data, sims);
    int outside = 0;
    for (const auto& c : sims) {
        bool out = false;
        for (int k = 0; k < m; ++k)
            if (c[k] < res.lo[k] - 1e-12 || c[k] > res.hi[k] + 1e-12) out = true;
        if (out) ++outside;
    }
    CHECK(outside <= static_cast<int>(std::floor(0.05 * (s + 1))));
}

TEST_CASE("mismatched curve lengths are rejected") {
    std::vector<std::vector<double>> sims{{1.0, 2.0}, {1.0}};
    CHECK_THROWS_AS(global_envelope_erl({0.0, 0.0}, sims), GridMismatch);
}

TEST_CASE("model check pipeline produces a valid p-value on its own null") {
    auto net = fixtures::y_tree(4.0, 4.0, 4.0);
    auto grid = make_grid(net, 0.4);
    MetricEngine eng(net, MetricKind::Resistance);
    CoxModel model;
    model.kind = CoxKind::LGCP;
    model.intensity = IntensityModel::constant(2.0);
    model.cov.sigma2 = 0.5;
    model.cov.family = CorrelationFamily::exponential(0.5);
    RngStream streams(1234);
    auto rng = streams.stream(1000, 7);
    CoxSimulator sim(model, net, grid);
    PointPattern data = sim.simulate(rng);
    while (data.size() < 2) data = sim.simulate(rng);
    EnvelopePipelineOptions opt;
    opt.nSims = 99;
    opt.nPilot = 19;
    opt.nGrid = 64;
    EnvelopePipelineResult res = envelope_pipeline(data, model, grid, eng, streams, opt);
    CHECK(res.test.pvalue > 0.0);
    CHECK(res.test.pvalue <= 1.0);
    CHECK(res.rGrid.size() == 64);
    CHECK(res.test.data.size() >= 2 * res.rGrid.size());
}

TEST_CASE("pipeline is reproducible for a fixed seed") {
    auto net = fixtures::y_tree(3.0, 3.0, 3.0);
    auto grid = make_grid(net, 0.5);
    MetricEngine eng(net, MetricKind::Geodesic);
    CoxModel model;
    model.kind = CoxKind::LGCP;
    model.intensity = IntensityModel::constant(1.5);
    model.cov.sigma2 = 0.3;
    model.cov.family = CorrelationFamily::exponential(1.0);
    model.cov.metric = MetricKind::Geodesic;
    RngStream streams(55);
    auto rng = streams.stream(500);
    CoxSimulator sim(model, net, grid);
    PointPattern data = sim.simulate(rng);
    while (data.size() < 2) data = sim.simulate(rng);
    EnvelopePipelineOptions opt;
    opt.nSims = 49;
    opt.nPilot = 9;
    opt.nGrid = 32;
    auto a = envelope_pipeline(data, model, grid, eng, streams, opt);
    opt.threads = 4;
    auto b = envelope_pipeline(data, model, grid, eng, streams, opt);
    CHECK(a.test.pvalue == b.test.pvalue);
    CHECK(a.rGrid == b.rGrid);
    CHECK(a.test.data == b.test.data);
}
