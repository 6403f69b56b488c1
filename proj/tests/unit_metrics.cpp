#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "netcox/metrics.hpp"

using namespace netcox;

TEST_CASE("geodesic distances on a Y tree") {
    auto net = fixtures::y_tree(2.0, 3.0, 1.0);
    CHECK(geodesic_distance(net, {0, 0.5}, {0, 1.5}) == doctest::Approx(1.0));
    CHECK(geodesic_distance(net, {0, 0.5}, {1, 1.0}) == doctest::Approx(1.5));
    CHECK(geodesic_distance(net, {1, 3.0}, {2, 1.0}) == doctest::Approx(4.0));
    CHECK(geodesic_distance(net, {0, 0.0}, {0, 0.0}) == doctest::Approx(0.0));
}

TEST_CASE("geodesic takes the shorter way around a loop") {
    auto net = fixtures::polygon_loop(4, 8.0);
    CHECK(geodesic_distance(net, {0, 0.0}, {1, 1.0}) == doctest::Approx(3.0));
    CHECK(geodesic_distance(net, {0, 0.0}, {2, 1.0}) == doctest::Approx(3.0));  // wraps
}

TEST_CASE("resistance equals geodesic on trees") {
    std::mt19937_64 rng(11);
    auto net = fixtures::random_network(rng, 10, 20, true);
    auto rs = ResistanceStructure::build(net);
    for (int i = 0; i < 30; ++i) {
        NetPoint u = fixtures::random_point(net, rng);
        NetPoint v = fixtures::random_point(net, rng);
        CHECK(rs.distance(u, v) == doctest::Approx(geodesic_distance(net, u, v)).epsilon(1e-12));
    }
}

TEST_CASE("resistance on a loop follows the parallel resistor formula") {
    double total = 12.0;
    auto net = fixtures::polygon_loop(6, total);
    auto rs = ResistanceStructure::build(net);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 30; ++i) {
        NetPoint u = fixtures::random_point(net, rng);
        NetPoint v = fixtures::random_point(net, rng);
        double dg = geodesic_distance(net, u, v);
        CHECK(rs.distance(u, v) == doctest::Approx(dg - dg * dg / total).epsilon(1e-12));
    }
}

TEST_CASE("resistance distance matches the electrical oracle on a theta graph") {
    auto net = fixtures::theta_graph();
    auto rs = ResistanceStructure::build(net);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 40; ++i) {
        NetPoint u = fixtures::random_point(net, rng);
        NetPoint v = fixtures::random_point(net, rng);
        double oracle = fixtures::kirchhoff_resistance(net, u, v);
        CHECK(rs.distance(u, v) == doctest::Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("segment curvature is nonpositive and zero on bridges") {
    auto theta = fixtures::theta_graph();
    auto rsTheta = ResistanceStructure::build(theta);
    for (int i = 0; i < theta.numSegments(); ++i) CHECK(rsTheta.segmentA(i) < 0.0);
    auto tree = fixtures::y_tree();
    auto rsTree = ResistanceStructure::build(tree);
    for (int i = 0; i < tree.numSegments(); ++i)
        CHECK(rsTree.segmentA(i) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("profile is exact on foreign segments and rejects the kink case") {
    auto net = fixtures::polygon_loop(5, 10.0);
    auto rs = ResistanceStructure::build(net);
    NetPoint u{0, 0.7};
    auto quad = rs.profile(u, 2);
    for (double t : {0.1, 0.9, 1.7}) {
        CHECK(quad.eval(t) == doctest::Approx(rs.distance(u, {2, t})).epsilon(1e-12));
    }
    CHECK_THROWS_AS(rs.profile(u, 0), UndefinedAtKink);
}

TEST_CASE("derivative matches finite differences away from kinks") {
    auto net = fixtures::theta_graph();
    auto rs = ResistanceStructure::build(net);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 50; ++i) {
        NetPoint u = fixtures::random_point(net, rng);
        int seg = std::uniform_int_distribution<int>(0, net.numSegments() - 1)(rng);
        double l = net.segment(seg).length;
        double t = std::uniform_real_distribution<double>(0.1 * l, 0.9 * l)(rng);
        if (u.segment == seg && std::abs(t - u.offset) < 0.05 * l) continue;
        double h = 1e-6 * l;
        double fd = (rs.distance(u, {seg, t + h}) - rs.distance(u, {seg, t - h})) / (2 * h);
        CHECK(rs.derivative(u, {seg, t}) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("derivative at the kink throws") {
    auto net = fixtures::theta_graph();
    auto rs = ResistanceStructure::build(net);
    CHECK_THROWS_AS(rs.derivative({2, 0.5}, {2, 0.5}), UndefinedAtKink);
}

TEST_CASE("origin choice does not change resistance distances") {
    auto net = fixtures::theta_graph();
    auto rs0 = ResistanceStructure::build(net, 0);
    auto rs3 = ResistanceStructure::build(net, 3);
    std::mt19937_64 rng(17);
    for (int i = 0; i < 25; ++i) {
        NetPoint u = fixtures::random_point(net, rng);
        NetPoint v = fixtures::random_point(net, rng);
        CHECK(rs0.distance(u, v) == doctest::Approx(rs3.distance(u, v)).epsilon(1e-10));
    }
}

TEST_CASE("geodesic level set weights on a single segment") {
    auto net = fixtures::single_segment(1.0);
    MetricEngine eng(net, MetricKind::Geodesic);
    PointWeights pw(eng, {0, 0.3});
    CHECK(pw.weight(0.2) == doctest::Approx(0.5));   // two points at distance 0.2
    CHECK(pw.weight(0.5) == doctest::Approx(1.0));   // only the right side remains
    CHECK_THROWS_AS(pw.weight(0.9), RadiusBeyondNetwork);
}

TEST_CASE("geodesic weights on the Y tree count branch multiplicity") {
    auto net = fixtures::y_tree(2.0, 2.0, 2.0);
    MetricEngine eng(net, MetricKind::Geodesic);
    PointWeights pw(eng, {0, 0.5});  // interior of the first arm, near the hub
    CHECK(pw.weight(0.25) == doctest::Approx(0.5));
    CHECK(pw.weight(1.0) == doctest::Approx(1.0 / 3.0));  // leafward + both other arms
    CHECK(pw.weight(1.6) == doctest::Approx(0.5));        // leafward ray has left the network
}

namespace {

// measure of the ball {v : d(u,v) <= r} by dense arc-length sampling
double ball_measure(const MetricEngine& eng, NetPoint u, double r, double step) {
    const auto& net = eng.net();
    double total = 0.0;
    for (int s = 0; s < net.numSegments(); ++s) {
        double l = net.segment(s).length;
        int n = static_cast<int>(l / step);
        for (int k = 0; k < n; ++k) {
            double t = (k + 0.5) * l / n;
            if (eng.distance(u, {s, t}) <= r) total += l / n;
        }
    }
    return total;
}

}  // namespace

TEST_CASE("resistance jacobian sum matches the ball measure derivative") {
    auto net = fixtures::theta_graph();
    MetricEngine eng(net, MetricKind::Resistance);
    NetPoint u{2, 0.8};
    PointWeights pw(eng, u);
    for (double r : {0.3, 0.7, 1.1}) {
        double h = 1e-3;
        double numeric =
            (ball_measure(eng, u, r + h, 2e-5) - ball_measure(eng, u, r - h, 2e-5)) / (2 * h);
        CHECK(pw.sumInvJacobian(r) == doctest::Approx(numeric).epsilon(0.05));
    }
}

TEST_CASE("distance matrix is symmetric with zero diagonal") {
    auto net = fixtures::theta_graph();
    std::mt19937_64 rng(23);
    std::vector<NetPoint> pts;
    for (int i = 0; i < 12; ++i) pts.push_back(fixtures::random_point(net, rng));
    for (MetricKind kind : {MetricKind::Geodesic, MetricKind::Resistance}) {
        MetricEngine eng(net, kind);
        Eigen::MatrixXd D = eng.distanceMatrix(pts);
        CHECK((D - D.transpose()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(D.diagonal().cwiseAbs().maxCoeff() < 1e-12);
        for (int i = 0; i < D.rows(); ++i)
            for (int j = 0; j < D.cols(); ++j)
                CHECK(D(i, j) == doctest::Approx(eng.distance(pts[i], pts[j])).epsilon(1e-10));
    }
}
