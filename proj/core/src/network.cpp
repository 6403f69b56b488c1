#include "netcox/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stack>

namespace netcox {

namespace {

double euclid(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Distance from point p to segment [a,b].
double pointSegmentDist(const Vec2& p, const Vec2& a, const Vec2& b) {
    double dx = b.x - a.x, dy = b.y - a.y;
    double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) return euclid(p, a);
    double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    Vec2 proj{a.x + t * dx, a.y + t * dy};
    return euclid(p, proj);
}

// True if the open interiors of [a1,b1] and [a2,b2] come within tol of each other
// at a proper crossing.
bool segmentsCross(const Vec2& a1, const Vec2& b1, const Vec2& a2, const Vec2& b2, double tol) {
    double d1 = cross(a2, b2, a1);
    double d2 = cross(a2, b2, b1);
    double d3 = cross(a1, b1, a2);
    double d4 = cross(a1, b1, b2);
    double scale = std::max({euclid(a1, b1), euclid(a2, b2), 1.0});
    double eps = tol * scale;
    if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
        ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)))
        return true;
    return false;
}

}  // namespace

double LinearNetwork::boundingBoxDiagonal() const {
    double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
    double hi_x = -lo_x, hi_y = -lo_x;
    for (const auto& v : vertices_) {
        lo_x = std::min(lo_x, v.x);
        lo_y = std::min(lo_y, v.y);
        hi_x = std::max(hi_x, v.x);
        hi_y = std::max(hi_y, v.y);
    }
    return std::hypot(hi_x - lo_x, hi_y - lo_y);
}

LinearNetwork LinearNetwork::build(std::vector<Vec2> vertices, std::vector<Segment> segments,
                                   double tolerance) {
    LinearNetwork net;
    net.vertices_ = std::move(vertices);
    net.segments_ = std::move(segments);
    const int nv = net.numVertices();
    if (nv == 0) throw InvalidSegment("network has no vertices");

    for (int i = 0; i < net.numSegments(); ++i) {
        Segment& s = net.segments_[i];
        if (s.a < 0 || s.a >= nv || s.b < 0 || s.b >= nv)
            throw InvalidSegment("segment " + std::to_string(i) + " references an invalid vertex");
        if (s.a == s.b)
            throw InvalidSegment("segment " + std::to_string(i) + " is a self-loop");
        if (s.length <= 0.0)
            s.length = euclid(net.vertices_[s.a], net.vertices_[s.b]);
        if (!(s.length > 0.0) || !std::isfinite(s.length))
            throw ZeroLengthSegment("segment " + std::to_string(i) + " has non-positive length");
    }

    net.adjacency_.assign(nv, {});
    net.totalLength_ = 0.0;
    for (int i = 0; i < net.numSegments(); ++i) {
        const Segment& s = net.segments_[i];
        net.adjacency_[s.a].push_back(i);
        net.adjacency_[s.b].push_back(i);
        net.totalLength_ += s.length;
    }

    if (tolerance < 0.0) tolerance = 1e-9 * std::max(net.boundingBoxDiagonal(), 1.0);

    // Geometric checks: interior crossings and vertices inside non-incident segments.
    // Pairs sharing an endpoint (including both, abstracting curved parallels) are skipped.
    const int m = net.numSegments();
    for (int i = 0; i < m; ++i) {
        const Segment& si = net.segments_[i];
        for (int j = i + 1; j < m; ++j) {
            const Segment& sj = net.segments_[j];
            if (si.a == sj.a || si.a == sj.b || si.b == sj.a || si.b == sj.b) continue;
            if (segmentsCross(net.vertices_[si.a], net.vertices_[si.b], net.vertices_[sj.a],
                              net.vertices_[sj.b], tolerance))
                throw SegmentOverlap("segments " + std::to_string(i) + " and " + std::to_string(j) +
                                     " cross at interior points");
        }
        for (int v = 0; v < nv; ++v) {
            if (v == si.a || v == si.b) continue;
            double d = pointSegmentDist(net.vertices_[v], net.vertices_[si.a], net.vertices_[si.b]);
            double da = euclid(net.vertices_[v], net.vertices_[si.a]);
            double db = euclid(net.vertices_[v], net.vertices_[si.b]);
            if (d < tolerance && da > tolerance && db > tolerance &&
                si.length <= euclid(net.vertices_[si.a], net.vertices_[si.b]) * (1.0 + 1e-9))
                throw SegmentOverlap("vertex " + std::to_string(v) + " lies inside segment " +
                                     std::to_string(i));
        }
    }

    // Connectivity.
    std::vector<char> seen(nv, 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int count = 1;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int si : net.adjacency_[u]) {
            const Segment& s = net.segments_[si];
            int w = (s.a == u) ? s.b : s.a;
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                queue.push_back(w);
            }
        }
    }
    if (count != nv) throw DisconnectedNetwork("network has more than one connected component");

    return net;
}

NetPoint LinearNetwork::canonical(NetPoint p) const {
    checkPoint(p);
    const double l = segments_[p.segment].length;
    const double snap = 1e-12 * l;
    if (p.offset <= snap) p.offset = 0.0;
    if (p.offset >= l - snap) p.offset = l;
    return p;
}

int LinearNetwork::vertexOf(NetPoint p) const {
    p = canonical(p);
    if (p.offset == 0.0) return segments_[p.segment].a;
    if (p.offset == segments_[p.segment].length) return segments_[p.segment].b;
    return -1;
}

NetPoint LinearNetwork::vertexPoint(int v) const {
    const std::vector<int>& inc = adjacency_[v];
    if (inc.empty()) throw InvalidSegment("vertex has no incident segment");
    int si = inc.front();
    const Segment& s = segments_[si];
    return (s.a == v) ? NetPoint{si, 0.0} : NetPoint{si, s.length};
}

bool LinearNetwork::samePoint(NetPoint p, NetPoint q) const {
    int vp = vertexOf(p), vq = vertexOf(q);
    if (vp >= 0 || vq >= 0) return vp == vq && vp >= 0;
    return p.segment == q.segment && std::abs(p.offset - q.offset) == 0.0;
}

Vec2 LinearNetwork::position(NetPoint p) const {
    checkPoint(p);
    const Segment& s = segments_[p.segment];
    double t = p.offset / s.length;
    const Vec2& a = vertices_[s.a];
    const Vec2& b = vertices_[s.b];
    return Vec2{(1.0 - t) * a.x + t * b.x, (1.0 - t) * a.y + t * b.y};
}

void LinearNetwork::checkPoint(const NetPoint& p) const {
    if (p.segment < 0 || p.segment >= numSegments())
        throw OffsetOutOfRange("point references invalid segment " + std::to_string(p.segment));
    const double l = segments_[p.segment].length;
    if (!(p.offset >= 0.0 && p.offset <= l))
        throw OffsetOutOfRange("offset " + std::to_string(p.offset) + " outside [0, " +
                               std::to_string(l) + "]");
}

LinearNetwork LinearNetwork::splitSegment(int seg, double offset) const {
    if (seg < 0 || seg >= numSegments()) throw OffsetOutOfRange("invalid segment index");
    const Segment s = segments_[seg];
    if (!(offset > 0.0 && offset < s.length))
        throw OffsetOutOfRange("split offset must be strictly interior");

    LinearNetwork out;
    out.vertices_ = vertices_;
    out.segments_ = segments_;
    Vec2 p = position(NetPoint{seg, offset});
    int newV = static_cast<int>(out.vertices_.size());
    out.vertices_.push_back(p);
    out.segments_[seg] = Segment{s.a, newV, offset, s.mark};
    out.segments_.push_back(Segment{newV, s.b, s.length - offset, s.mark});

    out.adjacency_.assign(out.vertices_.size(), {});
    out.totalLength_ = 0.0;
    for (int i = 0; i < out.numSegments(); ++i) {
        const Segment& t = out.segments_[i];
        out.adjacency_[t.a].push_back(i);
        out.adjacency_[t.b].push_back(i);
        out.totalLength_ += t.length;
    }
    return out;
}

Topology LinearNetwork::classify() const {
    if (numSegments() == numVertices() - 1) return Topology::Tree;
    bool allDeg2 = true;
    for (int v = 0; v < numVertices(); ++v)
        if (degree(v) != 2) allDeg2 = false;
    if (allDeg2 && numSegments() == numVertices()) return Topology::Loop;
    return Topology::General;
}

bool LinearNetwork::isOneSumOfTreesAndLoops() const {
    // Biconnected components via iterative Hopcroft-Tarjan over segment ids;
    // every block must be a single edge or a cycle (#edges == #vertices in block).
    const int nv = numVertices();
    std::vector<int> disc(nv, -1), low(nv, 0);
    std::vector<std::vector<int>> blocks;
    std::stack<int> edgeStack;

    struct Frame {
        int v;
        int parentEdge;
        size_t childIdx;
    };

    int timer = 0;
    std::stack<Frame> st;
    st.push({0, -1, 0});
    disc[0] = low[0] = timer++;
    while (!st.empty()) {
        Frame& f = st.top();
        if (f.childIdx < adjacency_[f.v].size()) {
            int ei = adjacency_[f.v][f.childIdx++];
            if (ei == f.parentEdge) continue;
            const Segment& s = segments_[ei];
            int w = (s.a == f.v) ? s.b : s.a;
            if (disc[w] == -1) {
                edgeStack.push(ei);
                disc[w] = low[w] = timer++;
                st.push({w, ei, 0});
            } else if (disc[w] < disc[f.v]) {
                edgeStack.push(ei);
                low[f.v] = std::min(low[f.v], disc[w]);
            }
        } else {
            int v = f.v;
            int pe = f.parentEdge;
            st.pop();
            if (!st.empty()) {
                int u = st.top().v;
                low[u] = std::min(low[u], low[v]);
                if (low[v] >= disc[u]) {
                    std::vector<int> block;
                    while (!edgeStack.empty()) {
                        int e = edgeStack.top();
                        edgeStack.pop();
                        block.push_back(e);
                        if (e == pe) break;
                    }
                    if (!block.empty()) blocks.push_back(std::move(block));
                }
            }
        }
    }

    for (const auto& block : blocks) {
        if (block.size() == 1) continue;
        std::vector<int> vs;
        for (int ei : block) {
            vs.push_back(segments_[ei].a);
            vs.push_back(segments_[ei].b);
        }
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        if (block.size() != vs.size()) return false;  // not a simple cycle
        for (int v : vs) {
            int degInBlock = 0;
            for (int ei : block)
                if (segments_[ei].a == v || segments_[ei].b == v) ++degInBlock;
            if (degInBlock != 2) return false;
        }
    }
    return true;
}

std::vector<std::vector<int>> LinearNetwork::childrenGenerations(int origin) const {
    if (classify() != Topology::Tree) throw NotATree("children generations require a tree");
    if (origin < 0 || origin >= numVertices()) throw InvalidSegment("invalid origin vertex");
    std::vector<std::vector<int>> gens;
    std::vector<char> seen(numVertices(), 0);
    gens.push_back({origin});
    seen[origin] = 1;
    while (true) {
        std::vector<int> next;
        for (int u : gens.back()) {
            for (int si : adjacency_[u]) {
                const Segment& s = segments_[si];
                int w = (s.a == u) ? s.b : s.a;
                if (!seen[w]) {
                    seen[w] = 1;
                    next.push_back(w);
                }
            }
        }
        if (next.empty()) break;
        std::sort(next.begin(), next.end());
        gens.push_back(std::move(next));
    }
    return gens;
}

NetworkGrid make_grid(const LinearNetwork& net, double spacing) {
    if (!(spacing > 0.0)) throw InvalidParameters("grid spacing must be positive");
    NetworkGrid grid;
    grid.net = &net;
    grid.spacing = spacing;
    grid.vertexIndex.resize(net.numVertices());
    for (int v = 0; v < net.numVertices(); ++v) {
        grid.vertexIndex[v] = static_cast<int>(grid.points.size());
        grid.points.push_back(net.vertexPoint(v));
    }
    grid.perSegment.resize(net.numSegments());
    for (int j = 0; j < net.numSegments(); ++j) {
        const Segment& s = net.segment(j);
        int n = std::max(1, static_cast<int>(std::ceil(s.length / spacing)));
        grid.perSegment[j].push_back(grid.vertexIndex[s.a]);
        for (int i = 1; i < n; ++i) {
            grid.perSegment[j].push_back(static_cast<int>(grid.points.size()));
            grid.points.push_back(NetPoint{j, i * s.length / n});
        }
        grid.perSegment[j].push_back(grid.vertexIndex[s.b]);
    }
    return grid;
}

int NetworkGrid::nearest(NetPoint u, int* secondOut) const {
    if (secondOut) *secondOut = -1;
    net->checkPoint(u);
    const auto& ids = perSegment[u.segment];
    // Grid offsets along the segment are 0, l/n, ..., l.
    const double l = net->segment(u.segment).length;
    const int n = static_cast<int>(ids.size()) - 1;
    double pos = u.offset / l * n;
    int lo = std::clamp(static_cast<int>(std::floor(pos)), 0, n - 1);
    double frac = pos - lo;
    if (frac == 0.5) {
        if (secondOut) *secondOut = ids[lo + 1];
        return ids[lo];
    }
    return (frac < 0.5) ? ids[lo] : ids[lo + 1];
}

}  // namespace netcox
