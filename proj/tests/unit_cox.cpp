#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "netcox/cox.hpp"
#include "netcox/rng.hpp"

using namespace netcox;

namespace {

CoxModel make_model(CoxKind kind, double sigma2, double s, int h, double rho) {
    CoxModel m;
    m.kind = kind;
    m.h = h;
    m.intensity = IntensityModel::constant(rho);
    m.cov.sigma2 = sigma2;
    m.cov.family = CorrelationFamily::exponential(s);
    return m;
}

}  // namespace

TEST_CASE("model validation") {
    CHECK_THROWS_AS(make_model(CoxKind::LGCP, 1.0, 1.0, 0, 1.0).validate(), InvalidModel);
    CHECK_THROWS_AS(make_model(CoxKind::LGCP, 1.0, 1.0, 2, 1.0).validate(), InvalidModel);
    CHECK_THROWS_AS(make_model(CoxKind::PCPP, 2.0, 1.0, 1, 1.0).validate(), InvalidModel);
    CHECK_NOTHROW(make_model(CoxKind::PCPP, 1.0, 1.0, 3, 1.0).validate());
    CHECK_NOTHROW(make_model(CoxKind::ICP, 5.0, 1.0, 2, 1.0).validate());
}

TEST_CASE("pair correlation closed forms") {
    double s2 = 1.3, s = 0.4;
    auto r0 = [&](double t) { return std::exp(-s * t); };

    auto lgcp = make_model(CoxKind::LGCP, s2, s, 1, 1.0);
    CHECK(lgcp.pcf(2.0) == doctest::Approx(std::exp(s2 * r0(2.0))).epsilon(1e-14));
    CHECK(lgcp.clusterIndex() == doctest::Approx(std::exp(s2) - 1.0).epsilon(1e-14));

    auto icp = make_model(CoxKind::ICP, s2, s, 2, 1.0);
    double q = (1.0 + s2) * (1.0 + s2);
    double r = r0(1.5);
    CHECK(icp.pcf(1.5) == doctest::Approx(std::pow(q / (q - s2 * s2 * r * r), 1.0)).epsilon(1e-14));
    CHECK(icp.pcf(0.0) == doctest::Approx(icp.clusterIndex() + 1.0).epsilon(1e-12));

    auto pcpp = make_model(CoxKind::PCPP, 1.0, s, 4, 1.0);
    CHECK(pcpp.pcf(1.0) == doctest::Approx(1.0 + 2.0 * r0(1.0) * r0(1.0) / 4.0).epsilon(1e-14));
    CHECK(pcpp.clusterIndex() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("pcf tends to one at large distances") {
    for (auto kind : {CoxKind::LGCP, CoxKind::ICP}) {
        auto m = make_model(kind, 2.0, 0.5, 1, 1.0);
        CHECK(m.pcf(100.0) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(m.pcf(0.5) > m.pcf(5.0));
    }
}

TEST_CASE("mean selection probability formula") {
    CHECK(mean_selection_prob(10.0, 1) == doctest::Approx(std::pow(21.0, -0.5)).epsilon(1e-14));
    CHECK(mean_selection_prob(1.0, 4) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("homogeneous Poisson simulation hits the target intensity") {
    auto net = fixtures::y_tree(2.0, 3.0, 1.0);  // |L| = 6
    RngStream streams(4);
    auto rng = streams.stream();
    double rho = 5.0;
    auto intensity = IntensityModel::constant(rho);
    double total = 0.0;
    const int N = 4000;
    for (int i = 0; i < N; ++i) {
        auto pat = simulate_poisson(intensity, net, rng);
        total += pat.size();
        for (const auto& p : pat.points) CHECK_NOTHROW(net.checkPoint(p));
    }
    double mean = total / N;
    double se = std::sqrt(rho * net.totalLength() / N);
    CHECK(std::abs(mean - rho * net.totalLength()) < 4.0 * se);
}

TEST_CASE("per-mark intensities are respected") {
    auto net = LinearNetwork::build({{0, 0}, {1, 0}, {1, 1}},
                                    {{0, 1, 10.0, "main"}, {1, 2, 10.0, "side"}});
    IntensityModel intensity = IntensityModel::byMark({{"main", 3.0}, {"side", 0.5}});
    RngStream streams(8);
    auto rng = streams.stream();
    double nMain = 0.0, nSide = 0.0;
    const int N = 3000;
    for (int i = 0; i < N; ++i) {
        auto pat = simulate_poisson(intensity, net, rng);
        for (const auto& p : pat.points) (p.segment == 0 ? nMain : nSide) += 1.0;
    }
    CHECK(nMain / N == doctest::Approx(30.0).epsilon(0.05));
    CHECK(nSide / N == doctest::Approx(5.0).epsilon(0.1));
}

TEST_CASE("LGCP simulation preserves the mean intensity") {
    auto net = fixtures::y_tree(2.0, 2.0, 2.0);
    auto grid = make_grid(net, 0.1);
    auto model = make_model(CoxKind::LGCP, 1.0, 0.5, 1, 4.0);
    CoxSimulator sim(model, net, grid);
    CHECK(sim.resolvedAlgo() == GpAlgo::Tree);  // exponential on a tree
    RngStream streams(12);
    auto rng = streams.stream();
    double total = 0.0, totalSq = 0.0;
    const int N = 3000;
    for (int i = 0; i < N; ++i) {
        double n = sim.simulate(rng).size();
        total += n;
        totalSq += n * n;
    }
    double mean = total / N;
    double sd = std::sqrt(totalSq / N - mean * mean);
    double target = 4.0 * net.totalLength();
    CHECK(std::abs(mean - target) < 4.0 * sd / std::sqrt(static_cast<double>(N)));
}

TEST_CASE("ICP retention matches the simulation thinning convention") {
    auto net = fixtures::y_tree(2.0, 2.0, 2.0);
    auto grid = make_grid(net, 0.1);
    auto model = make_model(CoxKind::ICP, 1.0, 0.5, 1, 20.0);
    CoxSimulator sim(model, net, grid);
    RngStream streams(19);
    auto rng = streams.stream();
    double kept = 0.0;
    const int N = 2000;
    for (int i = 0; i < N; ++i) {
        sim.simulate(rng);
        kept += sim.lastRetainedFraction();
    }
    // retention exp(-Y^2/2) with Var Y = sigma^2 keeps on average (1+s2)^{-h/2}
    CHECK(kept / N == doctest::Approx(std::pow(2.0, -0.5)).epsilon(0.03));
}

TEST_CASE("PCPP needs unit variance and keeps the intensity") {
    auto net = fixtures::y_tree(2.0, 2.0, 2.0);
    auto grid = make_grid(net, 0.1);
    auto model = make_model(CoxKind::PCPP, 1.0, 0.5, 2, 6.0);
    CoxSimulator sim(model, net, grid);
    RngStream streams(23);
    auto rng = streams.stream();
    double total = 0.0;
    const int N = 3000;
    for (int i = 0; i < N; ++i) total += sim.simulate(rng).size();
    CHECK(total / N == doctest::Approx(6.0 * net.totalLength()).epsilon(0.05));
}

TEST_CASE("eigendecomposition path is used off trees") {
    auto net = fixtures::polygon_loop(6, 12.0);
    auto grid = make_grid(net, 0.5);
    auto model = make_model(CoxKind::LGCP, 0.5, 1.0, 1, 2.0);
    CoxSimulator sim(model, net, grid);
    CHECK(sim.resolvedAlgo() == GpAlgo::Eig);
    RngStream streams(31);
    auto rng = streams.stream();
    CHECK_NOTHROW(sim.simulate(rng));
}

TEST_CASE("product form of the n-th order intensity") {
    auto net = fixtures::y_tree();
    MetricEngine eng(net, MetricKind::Resistance);
    IsotropicCovariance cov;
    cov.sigma2 = 0.8;
    cov.family = CorrelationFamily::exponential(1.0);
    std::vector<NetPoint> pts{{0, 0.2}, {1, 0.5}, {2, 0.4}};
    std::vector<double> rho{2.0, 3.0, 4.0};
    double expected = 2.0 * 3.0 * 4.0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            expected *= std::exp(cov.eval(eng.distance(pts[i], pts[j])));
    CHECK(lgcp_nth_intensity(rho, cov, eng, pts) == doctest::Approx(expected).epsilon(1e-12));
}
