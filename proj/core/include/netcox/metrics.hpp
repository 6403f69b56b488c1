#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "netcox/network.hpp"

namespace netcox {

enum class MetricKind { Geodesic, Resistance };

/// Shortest-path distances from a source point to every vertex (Dijkstra,
/// binary heap, ties broken by vertex index).
std::vector<double> geodesic_to_vertices(const LinearNetwork& net, NetPoint u);

double geodesic_distance(const LinearNetwork& net, NetPoint u, NetPoint v);
/// Fast path when distances from u to all vertices are already available.
double geodesic_distance(const LinearNetwork& net, NetPoint u, NetPoint v,
                         const std::vector<double>& uToVerts);

/// Resistance metric: vertex Laplacian with conductances 1/l, +1 at the
/// origin's diagonal entry, Sigma = Delta^{-1}, variogram extension off-vertex.
class ResistanceStructure {
public:
    static ResistanceStructure build(const LinearNetwork& net, int origin = 0);

    const LinearNetwork& net() const { return *net_; }
    int origin() const { return origin_; }

    double sigma(int u, int v) const { return sigma_(u, v); }
    /// Vertex-to-vertex resistance distance (variogram of Sigma).
    double dV(int u, int v) const {
        return sigma_(u, u) + sigma_(v, v) - 2.0 * sigma_(u, v);
    }
    /// Per-segment curvature A_i = d_V(a_i,b_i)/l_i^2 - 1/l_i (<= 0, zero on bridges).
    double segmentA(int i) const { return segA_[i]; }

    double distance(NetPoint u, NetPoint v) const;
    std::vector<double> toVertices(NetPoint u) const;

    /// d/dt d_R(u, v) where t is the offset of v along its segment.
    double derivative(NetPoint u, NetPoint v) const;

    /// d_R(u, .) restricted to segment i as A t^2 + B t + C. Requires that u is
    /// not an interior point of segment i (there the profile has a kink at u).
    struct Quad {
        double A, B, C;
        double eval(double t) const { return (A * t + B) * t + C; }
        double slope(double t) const { return 2.0 * A * t + B; }
    };
    Quad profile(NetPoint u, int seg) const;

    /// Candidate segments that can contain points within resistance distance r
    /// of u; a guaranteed superset by concavity of the per-segment profiles.
    std::vector<int> pairsWithin(NetPoint u, double r) const;

private:
    ResistanceStructure() = default;

    // Point as a weighting of at most two vertices plus a Brownian-bridge variance.
    struct Anchor {
        int va = -1, vb = -1;     // vb == -1 when the point sits at a vertex
        double ca = 1.0, cb = 0.0;
        double bridgeVar = 0.0;
    };
    Anchor anchor(NetPoint p) const;

    const LinearNetwork* net_ = nullptr;
    int origin_ = 0;
    Eigen::MatrixXd sigma_;
    std::vector<double> segA_;
};

/// Binds a network to one of the two model metrics.
class MetricEngine {
public:
    MetricEngine(const LinearNetwork& net, MetricKind kind);

    const LinearNetwork& net() const { return *net_; }
    MetricKind kind() const { return kind_; }
    const ResistanceStructure& resistance() const;

    double distance(NetPoint u, NetPoint v) const;
    std::vector<double> toVertices(NetPoint u) const;

    Eigen::MatrixXd distanceMatrix(const std::vector<NetPoint>& pts) const;

    /// R = inf_u sup_v d(u,v) approximated over the probe point set.
    double networkRadius(const std::vector<NetPoint>& probe) const;

private:
    const LinearNetwork* net_;
    MetricKind kind_;
    std::shared_ptr<const ResistanceStructure> rs_;
};

/// Distance-level-set weight w_delta(u, r) = 1 / sum_{v: d(u,v)=r} 1/J(u,v).
/// Precomputes per-source structures so repeated radii queries are cheap.
class PointWeights {
public:
    PointWeights(const MetricEngine& engine, NetPoint u);

    /// Sum of inverse Jacobians over the level set at radius r (0 when empty).
    double sumInvJacobian(double r) const;
    /// w in (0,1]; throws RadiusBeyondNetwork when the level set is empty.
    double weight(double r) const;

private:
    struct LinearPiece {
        double vLo, vHi;  // value range covered (vLo < vHi), slope +-1
    };
    struct QuadPiece {
        double A, B, C;   // value profile on [tLo, tHi]
        double tLo, tHi;
    };

    const MetricEngine* engine_;
    NetPoint u_;
    bool treatAsGeodesic_ = false;
    // geodesic: sorted piece-value endpoints; count(r) = #{vLo < r} - #{vHi < r}
    std::vector<double> eventR_;
    std::vector<double> highsSorted_;
    // resistance: per-segment quadratic pieces
    std::vector<QuadPiece> quads_;
};

double weight_w(const MetricEngine& engine, NetPoint u, double r);

}  // namespace netcox
