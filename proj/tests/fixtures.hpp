#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "netcox/network.hpp"

namespace fixtures {

using netcox::LinearNetwork;
using netcox::NetPoint;
using netcox::Segment;
using netcox::Vec2;

inline LinearNetwork single_segment(double length = 1.0) {
    return LinearNetwork::build({{0.0, 0.0}, {length, 0.0}}, {{0, 1, length}});
}

/// Three segments meeting at a central vertex.
inline LinearNetwork y_tree(double l0 = 1.0, double l1 = 1.0, double l2 = 1.0) {
    return LinearNetwork::build(
        {{0.0, 0.0}, {-1.0, 1.0}, {1.0, 1.0}, {0.0, -1.0}},
        {{0, 1, l0}, {0, 2, l1}, {0, 3, l2}});
}

inline LinearNetwork polygon_loop(int n, double totalLength) {
    std::vector<Vec2> vs;
    std::vector<Segment> segs;
    for (int i = 0; i < n; ++i) {
        double a = 2.0 * M_PI * i / n;
        vs.push_back({std::cos(a), std::sin(a)});
        Segment s;
        s.a = i;
        s.b = (i + 1) % n;
        s.length = totalLength / n;
        segs.push_back(s);
    }
    return LinearNetwork::build(std::move(vs), std::move(segs));
}

/// Two vertices joined by three internally disjoint paths (each path gets a
/// middle vertex so no two segments share both endpoints).
inline LinearNetwork theta_graph() {
    return LinearNetwork::build(
        {{0.0, 0.0}, {4.0, 0.0}, {2.0, 1.5}, {2.0, 0.0}, {2.0, -1.5}},
        {{0, 2, 2.5}, {2, 1, 2.5}, {0, 3, 2.0}, {3, 1, 2.0}, {0, 4, 2.5}, {4, 1, 2.5}});
}

/// A tree glued to a loop at one vertex: a 1-sum that is not a tree.
inline LinearNetwork tree_loop_one_sum() {
    return LinearNetwork::build(
        {{0.0, 0.0}, {1.0, 0.0}, {2.0, 1.0}, {2.0, -1.0}, {-1.0, 0.5}, {-1.0, -0.5}},
        {{0, 1, 1.0}, {1, 2, 1.5}, {2, 3, 2.0}, {3, 1, 1.5}, {0, 4, 1.2}, {0, 5, 0.8}});
}

/// Euclidean minimum spanning tree over random points plus extra non-crossing
/// chords; connected and geometrically valid by construction.
inline LinearNetwork random_network(std::mt19937_64& rng, int maxVertices = 12,
                                    int maxSegments = 20, bool treeOnly = false) {
    std::uniform_int_distribution<int> nvDist(4, maxVertices);
    std::uniform_real_distribution<double> pos(0.0, 10.0);
    const int nv = nvDist(rng);
    std::vector<Vec2> vs(nv);
    for (auto& v : vs) v = {pos(rng), pos(rng)};

    // Prim's algorithm under Euclidean distance
    auto d2 = [&](int a, int b) {
        double dx = vs[a].x - vs[b].x, dy = vs[a].y - vs[b].y;
        return dx * dx + dy * dy;
    };
    std::vector<char> inTree(nv, 0);
    std::vector<double> best(nv, 1e300);
    std::vector<int> parent(nv, -1);
    inTree[0] = 1;
    for (int j = 1; j < nv; ++j) {
        best[j] = d2(0, j);
        parent[j] = 0;
    }
    std::vector<Segment> segs;
    for (int it = 1; it < nv; ++it) {
        int pick = -1;
        for (int j = 0; j < nv; ++j)
            if (!inTree[j] && (pick < 0 || best[j] < best[pick])) pick = j;
        inTree[pick] = 1;
        segs.push_back({parent[pick], pick, 0.0, ""});
        for (int j = 0; j < nv; ++j)
            if (!inTree[j] && d2(pick, j) < best[j]) {
                best[j] = d2(pick, j);
                parent[j] = pick;
            }
    }

    if (!treeOnly) {
        auto cross = [&](int a, int b, int c, int d) {
            // proper crossing of open segments ab and cd
            if (a == c || a == d || b == c || b == d) return false;
            auto orient = [&](Vec2 p, Vec2 q, Vec2 r) {
                double v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
                return v > 1e-12 ? 1 : v < -1e-12 ? -1 : 0;
            };
            int o1 = orient(vs[a], vs[b], vs[c]);
            int o2 = orient(vs[a], vs[b], vs[d]);
            int o3 = orient(vs[c], vs[d], vs[a]);
            int o4 = orient(vs[c], vs[d], vs[b]);
            return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
        };
        std::vector<std::pair<int, int>> candidates;
        for (int a = 0; a < nv; ++a)
            for (int b = a + 1; b < nv; ++b) candidates.push_back({a, b});
        std::shuffle(candidates.begin(), candidates.end(), rng);
        std::uniform_int_distribution<int> extraDist(0, std::max(0, maxSegments - nv + 1));
        int extras = extraDist(rng);
        for (auto [a, b] : candidates) {
            if (extras == 0 || static_cast<int>(segs.size()) >= maxSegments) break;
            bool dup = false, bad = false;
            for (const Segment& s : segs)
                if ((s.a == a && s.b == b) || (s.a == b && s.b == a)) dup = true;
            if (dup) continue;
            for (const Segment& s : segs)
                if (cross(a, b, s.a, s.b)) bad = true;
            // reject chords passing too close to another vertex
            for (int v = 0; v < nv && !bad; ++v) {
                if (v == a || v == b) continue;
                double vx = vs[b].x - vs[a].x, vy = vs[b].y - vs[a].y;
                double den = vx * vx + vy * vy;
                double f = ((vs[v].x - vs[a].x) * vx + (vs[v].y - vs[a].y) * vy) / den;
                if (f <= 0.0 || f >= 1.0) continue;
                double dx = vs[v].x - (vs[a].x + f * vx), dy = vs[v].y - (vs[a].y + f * vy);
                if (dx * dx + dy * dy < 1e-4) bad = true;
            }
            if (bad) continue;
            segs.push_back({a, b, 0.0, ""});
            --extras;
        }
    }
    return LinearNetwork::build(std::move(vs), std::move(segs));
}

inline NetPoint random_point(const LinearNetwork& net, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> segDist(0, net.numSegments() - 1);
    int seg = segDist(rng);
    std::uniform_real_distribution<double> off(0.0, net.segment(seg).length);
    return net.canonical({seg, off(rng)});
}

/// Recursive branching tree with a dendrite-like shape, rescaled to the given
/// total length; marks distinguish the trunk from the branches.
inline LinearNetwork dendrite_tree(std::mt19937_64& rng, int targetSegments = 120,
                                   double totalLength = 736.0) {
    // elongated trunk with short side chains, like a real dendrite: the trunk
    // carries most of the length so every point has a large eccentricity
    const int trunkSegs = std::max(2, targetSegments / 2);
    std::vector<Vec2> vs;
    std::vector<Segment> segs;
    std::uniform_real_distribution<double> trunkLen(4.0, 8.0);
    std::uniform_real_distribution<double> sideLen(0.5, 2.0);
    for (int k = 0; k <= trunkSegs; ++k) vs.push_back({0.0, static_cast<double>(k)});
    for (int k = 0; k < trunkSegs; ++k) segs.push_back({k, k + 1, trunkLen(rng), "main"});

    std::vector<std::pair<int, int>> slots;  // (trunk vertex, side)
    for (int k = 1; k < trunkSegs; ++k) {
        slots.push_back({k, +1});
        slots.push_back({k, -1});
    }
    std::shuffle(slots.begin(), slots.end(), rng);
    std::uniform_int_distribution<int> chainLen(1, 3);
    size_t slot = 0;
    while (static_cast<int>(segs.size()) < targetSegments && slot < slots.size()) {
        auto [k, side] = slots[slot++];
        int prev = k;
        int m = chainLen(rng);
        for (int j = 1; j <= m && static_cast<int>(segs.size()) < targetSegments; ++j) {
            int nid = static_cast<int>(vs.size());
            vs.push_back({side * static_cast<double>(j), static_cast<double>(k)});
            segs.push_back({prev, nid, sideLen(rng), "side"});
            prev = nid;
        }
    }
    double total = 0.0;
    for (const Segment& s : segs) total += s.length;
    for (Segment& s : segs) s.length *= totalLength / total;
    return LinearNetwork::build(std::move(vs), std::move(segs));
}

/// Effective resistance between two network points from first principles:
/// both points become nodes of an electrical network whose edge conductances
/// are reciprocal segment lengths; solve the Kirchhoff equations directly.
inline double kirchhoff_resistance(const LinearNetwork& net, NetPoint u, NetPoint v) {
    u = net.canonical(u);
    v = net.canonical(v);
    struct Edge {
        int a, b;
        double len;
    };
    std::vector<Edge> edges;
    int nNodes = net.numVertices();
    int uNode = -1, vNode = -1;
    for (int i = 0; i < net.numSegments(); ++i) {
        const Segment& s = net.segment(i);
        std::vector<std::pair<double, int>> cuts;  // offset, node id
        cuts.push_back({0.0, s.a});
        if (u.segment == i && net.vertexOf(u) < 0) {
            uNode = nNodes++;
            cuts.push_back({u.offset, uNode});
        }
        if (v.segment == i && net.vertexOf(v) < 0) {
            if (u.segment == i && std::abs(v.offset - u.offset) < 1e-15) {
                vNode = uNode;
            } else {
                vNode = nNodes++;
                cuts.push_back({v.offset, vNode});
            }
        }
        cuts.push_back({s.length, s.b});
        std::sort(cuts.begin(), cuts.end());
        for (size_t k = 1; k < cuts.size(); ++k)
            edges.push_back({cuts[k - 1].second, cuts[k].second, cuts[k].first - cuts[k - 1].first});
    }
    if (uNode < 0) uNode = net.vertexOf(u);
    if (vNode < 0) vNode = net.vertexOf(v);
    if (uNode == vNode) return 0.0;

    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(nNodes, nNodes);
    for (const Edge& e : edges) {
        if (e.len <= 0.0) {
            // coincident nodes: tie them with a huge conductance
            continue;
        }
        double c = 1.0 / e.len;
        L(e.a, e.a) += c;
        L(e.b, e.b) += c;
        L(e.a, e.b) -= c;
        L(e.b, e.a) -= c;
    }
    // ground node 0: drop its row and column
    int n = nNodes - 1;
    Eigen::MatrixXd Lr = L.block(1, 1, n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    if (uNode > 0) rhs[uNode - 1] += 1.0;
    if (vNode > 0) rhs[vNode - 1] -= 1.0;
    Eigen::VectorXd x = Lr.ldlt().solve(rhs);
    double pu = uNode > 0 ? x[uNode - 1] : 0.0;
    double pv = vNode > 0 ? x[vNode - 1] : 0.0;
    return pu - pv;
}

}  // namespace fixtures
