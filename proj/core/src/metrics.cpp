#include "netcox/metrics.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <queue>

namespace netcox {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::vector<double> geodesic_to_vertices(const LinearNetwork& net, NetPoint u) {
    u = net.canonical(u);
    const int nv = net.numVertices();
    std::vector<double> dist(nv, kInf);
    using Item = std::pair<double, int>;  // (distance, vertex); index breaks ties
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;

    int uv = net.vertexOf(u);
    if (uv >= 0) {
        dist[uv] = 0.0;
        heap.push({0.0, uv});
    } else {
        const Segment& s = net.segment(u.segment);
        dist[s.a] = u.offset;
        dist[s.b] = s.length - u.offset;
        heap.push({dist[s.a], s.a});
        heap.push({dist[s.b], s.b});
    }
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue;
        for (int si : net.incident(v)) {
            const Segment& s = net.segment(si);
            int w = (s.a == v) ? s.b : s.a;
            double nd = d + s.length;
            if (nd < dist[w]) {
                dist[w] = nd;
                heap.push({nd, w});
            }
        }
    }
    return dist;
}

double geodesic_distance(const LinearNetwork& net, NetPoint u, NetPoint v,
                         const std::vector<double>& uToVerts) {
    u = net.canonical(u);
    v = net.canonical(v);
    int vv = net.vertexOf(v);
    if (vv >= 0) return uToVerts[vv];
    const Segment& s = net.segment(v.segment);
    double d = std::min(uToVerts[s.a] + v.offset, uToVerts[s.b] + s.length - v.offset);
    if (u.segment == v.segment && net.vertexOf(u) < 0)
        d = std::min(d, std::abs(u.offset - v.offset));
    return d;
}

double geodesic_distance(const LinearNetwork& net, NetPoint u, NetPoint v) {
    return geodesic_distance(net, u, v, geodesic_to_vertices(net, u));
}

ResistanceStructure ResistanceStructure::build(const LinearNetwork& net, int origin) {
    if (origin < 0 || origin >= net.numVertices())
        throw InvalidSegment("origin vertex out of range");
    ResistanceStructure rs;
    rs.net_ = &net;
    rs.origin_ = origin;

    const int nv = net.numVertices();
    if (nv <= 2000) {
        Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(nv, nv);
        for (const Segment& s : net.segments()) {
            double con = 1.0 / s.length;
            delta(s.a, s.a) += con;
            delta(s.b, s.b) += con;
            delta(s.a, s.b) -= con;
            delta(s.b, s.a) -= con;
        }
        delta(origin, origin) += 1.0;
        Eigen::LLT<Eigen::MatrixXd> llt(delta);
        if (llt.info() != Eigen::Success)
            throw SingularMatrix("Cholesky factorization of Delta failed");
        rs.sigma_ = llt.solve(Eigen::MatrixXd::Identity(nv, nv));
    } else {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(4 * net.numSegments() + 1);
        for (const Segment& s : net.segments()) {
            double con = 1.0 / s.length;
            trip.emplace_back(s.a, s.a, con);
            trip.emplace_back(s.b, s.b, con);
            trip.emplace_back(s.a, s.b, -con);
            trip.emplace_back(s.b, s.a, -con);
        }
        trip.emplace_back(origin, origin, 1.0);
        Eigen::SparseMatrix<double> delta(nv, nv);
        delta.setFromTriplets(trip.begin(), trip.end());
        Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(delta);
        if (llt.info() != Eigen::Success)
            throw SingularMatrix("sparse Cholesky factorization of Delta failed");
        rs.sigma_ = llt.solve(Eigen::MatrixXd::Identity(nv, nv));
    }

    rs.segA_.resize(net.numSegments());
    for (int i = 0; i < net.numSegments(); ++i) {
        const Segment& s = net.segment(i);
        rs.segA_[i] = rs.dV(s.a, s.b) / (s.length * s.length) - 1.0 / s.length;
    }
    return rs;
}

ResistanceStructure::Anchor ResistanceStructure::anchor(NetPoint p) const {
    p = net_->canonical(p);
    Anchor a;
    int v = net_->vertexOf(p);
    if (v >= 0) {
        a.va = v;
        return a;
    }
    const Segment& s = net_->segment(p.segment);
    a.va = s.a;
    a.vb = s.b;
    a.ca = (s.length - p.offset) / s.length;
    a.cb = p.offset / s.length;
    a.bridgeVar = p.offset * (s.length - p.offset) / s.length;
    return a;
}

double ResistanceStructure::distance(NetPoint u, NetPoint v) const {
    u = net_->canonical(u);
    v = net_->canonical(v);
    if (net_->samePoint(u, v)) return 0.0;
    bool uInterior = net_->vertexOf(u) < 0;
    bool vInterior = net_->vertexOf(v) < 0;
    if (uInterior && vInterior && u.segment == v.segment) {
        double diff = std::abs(v.offset - u.offset);
        return segA_[u.segment] * diff * diff + diff;
    }
    Anchor au = anchor(u), av = anchor(v);
    int idx[4];
    double c[4];
    int n = 0;
    idx[n] = au.va; c[n++] = au.ca;
    if (au.vb >= 0) { idx[n] = au.vb; c[n++] = au.cb; }
    idx[n] = av.va; c[n++] = -av.ca;
    if (av.vb >= 0) { idx[n] = av.vb; c[n++] = -av.cb; }
    double var = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) var += c[i] * c[j] * sigma_(idx[i], idx[j]);
    return var + au.bridgeVar + av.bridgeVar;
}

std::vector<double> ResistanceStructure::toVertices(NetPoint u) const {
    Anchor au = anchor(net_->canonical(u));
    const int nv = net_->numVertices();
    double selfVar = au.ca * au.ca * sigma_(au.va, au.va);
    if (au.vb >= 0)
        selfVar += au.cb * au.cb * sigma_(au.vb, au.vb) +
                   2.0 * au.ca * au.cb * sigma_(au.va, au.vb);
    std::vector<double> out(nv);
    for (int w = 0; w < nv; ++w) {
        double cross = au.ca * sigma_(au.va, w);
        if (au.vb >= 0) cross += au.cb * sigma_(au.vb, w);
        out[w] = selfVar + sigma_(w, w) - 2.0 * cross + au.bridgeVar;
    }
    return out;
}

ResistanceStructure::Quad ResistanceStructure::profile(NetPoint u, int seg) const {
    u = net_->canonical(u);
    if (u.segment == seg && net_->vertexOf(u) < 0)
        throw UndefinedAtKink("profile undefined on the segment interior containing u");
    const Segment& s = net_->segment(seg);
    double dA = distance(u, NetPoint{seg, 0.0});
    double dB = distance(u, NetPoint{seg, s.length});
    double A = segA_[seg];
    double B = (dB - dA - A * s.length * s.length) / s.length;
    return Quad{A, B, dA};
}

double ResistanceStructure::derivative(NetPoint u, NetPoint v) const {
    u = net_->canonical(u);
    v = net_->canonical(v);
    if (net_->samePoint(u, v)) throw UndefinedAtKink("derivative undefined at u = v");
    bool uInterior = net_->vertexOf(u) < 0;
    if (uInterior && u.segment == v.segment) {
        double s = u.offset, t = v.offset;
        if (t == s) throw UndefinedAtKink("derivative undefined at the kink t = s");
        double A = segA_[u.segment];
        return (t > s) ? 2.0 * A * (t - s) + 1.0 : 2.0 * A * (t - s) - 1.0;
    }
    return profile(u, v.segment).slope(v.offset);
}

std::vector<int> ResistanceStructure::pairsWithin(NetPoint u, double r) const {
    u = net_->canonical(u);
    std::vector<double> dv = toVertices(u);
    std::vector<int> out;
    int uv = net_->vertexOf(u);
    for (int i = 0; i < net_->numSegments(); ++i) {
        const Segment& s = net_->segment(i);
        bool containsU = (uv < 0) ? (i == u.segment) : (s.a == uv || s.b == uv);
        if (containsU || std::min(dv[s.a], dv[s.b]) <= r) out.push_back(i);
    }
    return out;
}

MetricEngine::MetricEngine(const LinearNetwork& net, MetricKind kind)
    : net_(&net), kind_(kind) {
    if (kind_ == MetricKind::Resistance)
        rs_ = std::make_shared<ResistanceStructure>(ResistanceStructure::build(net));
}

const ResistanceStructure& MetricEngine::resistance() const {
    if (!rs_) throw InvalidParameters("resistance structure not built for geodesic engine");
    return *rs_;
}

double MetricEngine::distance(NetPoint u, NetPoint v) const {
    if (kind_ == MetricKind::Geodesic) return geodesic_distance(*net_, u, v);
    return rs_->distance(u, v);
}

std::vector<double> MetricEngine::toVertices(NetPoint u) const {
    if (kind_ == MetricKind::Geodesic) return geodesic_to_vertices(*net_, u);
    return rs_->toVertices(u);
}

Eigen::MatrixXd MetricEngine::distanceMatrix(const std::vector<NetPoint>& pts) const {
    const int n = static_cast<int>(pts.size());
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    if (kind_ == MetricKind::Geodesic) {
        for (int i = 0; i < n; ++i) {
            std::vector<double> dv = geodesic_to_vertices(*net_, pts[i]);
            for (int j = i + 1; j < n; ++j) {
                double d = geodesic_distance(*net_, pts[i], pts[j], dv);
                D(i, j) = D(j, i) = d;
            }
        }
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double d = rs_->distance(pts[i], pts[j]);
                D(i, j) = D(j, i) = d;
            }
    }
    return D;
}

double MetricEngine::networkRadius(const std::vector<NetPoint>& probe) const {
    Eigen::MatrixXd D = distanceMatrix(probe);
    double best = kInf;
    for (int i = 0; i < D.rows(); ++i) best = std::min(best, D.row(i).maxCoeff());
    return best;
}

PointWeights::PointWeights(const MetricEngine& engine, NetPoint u)
    : engine_(&engine), u_(engine.net().canonical(u)) {
    const LinearNetwork& net = engine.net();
    treatAsGeodesic_ = engine.kind() == MetricKind::Geodesic ||
                       net.classify() == Topology::Tree;  // |J| = 1 on trees

    if (treatAsGeodesic_) {
        std::vector<double> dv = engine.kind() == MetricKind::Geodesic
                                     ? geodesic_to_vertices(net, u_)
                                     : engine.toVertices(u_);
        std::vector<std::pair<double, double>> intervals;  // (vLo, vHi), one root inside
        auto addPiece = [&](double v0, double v1, double tSpan) {
            if (tSpan <= 0.0) return;
            intervals.emplace_back(std::min(v0, v1), std::max(v0, v1));
        };
        int uv = net.vertexOf(u_);
        for (int i = 0; i < net.numSegments(); ++i) {
            const Segment& s = net.segment(i);
            double da = dv[s.a], db = dv[s.b], l = s.length;
            if (uv < 0 && i == u_.segment) {
                double soff = u_.offset;
                double t1 = (soff - da) / 2.0;
                double t2 = (soff + db + l) / 2.0;
                addPiece(da, da + t1, t1);
                addPiece(soff - t1, 0.0, soff - t1);
                addPiece(0.0, t2 - soff, t2 - soff);
                addPiece(db + l - t2, db, l - t2);
            } else {
                double tStar = (db + l - da) / 2.0;
                addPiece(da, da + tStar, tStar);
                addPiece(db + l - tStar, db, l - tStar);
            }
        }
        // count(r) = #{pieces with vLo < r <= vHi}
        std::vector<double> lows, highs;
        for (auto& [lo, hi] : intervals) {
            lows.push_back(lo);
            highs.push_back(hi);
        }
        std::sort(lows.begin(), lows.end());
        std::sort(highs.begin(), highs.end());
        eventR_ = std::move(lows);
        highsSorted_ = std::move(highs);
    } else {
        const ResistanceStructure& rs = engine.resistance();
        int uv = net.vertexOf(u_);
        for (int i = 0; i < net.numSegments(); ++i) {
            const Segment& s = net.segment(i);
            if (uv < 0 && i == u_.segment) {
                double soff = u_.offset;
                double A = rs.segmentA(i);
                // t >= s branch: A (t-s)^2 + (t-s)
                quads_.push_back({A, -2.0 * A * soff + 1.0, A * soff * soff - soff, soff, s.length});
                // t <= s branch: A (s-t)^2 + (s-t)
                quads_.push_back({A, -2.0 * A * soff - 1.0, A * soff * soff + soff, 0.0, soff});
            } else {
                auto q = rs.profile(u_, i);
                quads_.push_back({q.A, q.B, q.C, 0.0, s.length});
            }
        }
    }
}

double PointWeights::sumInvJacobian(double r) const {
    if (!(r > 0.0)) return 0.0;
    if (treatAsGeodesic_) {
        auto below = [](const std::vector<double>& v, double x) {
            return static_cast<double>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
        };
        double nLow = below(eventR_, r);    // #{vLo < r}
        double nHigh = below(highsSorted_, r);  // #{vHi < r}
        return nLow - nHigh;                // J = 1 on every piece
    }
    double sum = 0.0;
    for (const QuadPiece& q : quads_) {
        double tol = 1e-9 * (q.tHi - q.tLo + 1.0);
        auto consider = [&](double t) {
            if (t <= q.tLo + tol || t >= q.tHi - tol) return;  // vertex/kink hits skipped
            double J = std::abs(2.0 * q.A * t + q.B);
            if (J > 1e-12) sum += 1.0 / J;
        };
        if (std::abs(q.A) < 1e-14) {
            if (std::abs(q.B) > 1e-14) consider((r - q.C) / q.B);
        } else {
            double disc = q.B * q.B - 4.0 * q.A * (q.C - r);
            if (disc >= 0.0) {
                double sq = std::sqrt(disc);
                consider((-q.B + sq) / (2.0 * q.A));
                consider((-q.B - sq) / (2.0 * q.A));
            }
        }
    }
    return sum;
}

double PointWeights::weight(double r) const {
    double s = sumInvJacobian(r);
    if (s <= 0.0)
        throw RadiusBeyondNetwork("empty distance level set at radius " + std::to_string(r));
    return 1.0 / s;
}

double weight_w(const MetricEngine& engine, NetPoint u, double r) {
    return PointWeights(engine, u).weight(r);
}

}  // namespace netcox
