#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netcox/errors.hpp"

namespace netcox {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Segment {
    int a = -1;               ///< vertex index of endpoint a
    int b = -1;               ///< vertex index of endpoint b
    double length = 0.0;      ///< arc length; may exceed the Euclidean endpoint distance
    std::string mark;         ///< optional class label (e.g. "main"/"side")
};

/// A location on the network: arc length offset from endpoint a of a segment.
struct NetPoint {
    int segment = -1;
    double offset = 0.0;
};

enum class Topology { Tree, Loop, General };

/// Immutable geometric graph of line segments meeting only at shared endpoints.
class LinearNetwork {
public:
    /// Validates topology and geometry. If tolerance < 0, it defaults to
    /// 1e-9 times the bounding box diagonal. Segments with length <= 0 use
    /// the Euclidean endpoint distance.
    static LinearNetwork build(std::vector<Vec2> vertices, std::vector<Segment> segments,
                               double tolerance = -1.0);

    int numVertices() const { return static_cast<int>(vertices_.size()); }
    int numSegments() const { return static_cast<int>(segments_.size()); }
    const Vec2& vertex(int v) const { return vertices_[v]; }
    const Segment& segment(int i) const { return segments_[i]; }
    const std::vector<Vec2>& vertices() const { return vertices_; }
    const std::vector<Segment>& segments() const { return segments_; }
    double totalLength() const { return totalLength_; }

    /// Segment indices incident to vertex v.
    const std::vector<int>& incident(int v) const { return adjacency_[v]; }
    int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }

    /// Snaps offsets within 1e-12 * length of an endpoint onto the vertex.
    NetPoint canonical(NetPoint p) const;
    /// Vertex id if p sits at a segment endpoint (after canonicalization), else -1.
    int vertexOf(NetPoint p) const;
    /// A representative NetPoint for vertex v.
    NetPoint vertexPoint(int v) const;
    bool samePoint(NetPoint p, NetPoint q) const;
    Vec2 position(NetPoint p) const;

    void checkPoint(const NetPoint& p) const;

    /// New network with segment i split at interior offset; distances are unchanged.
    LinearNetwork splitSegment(int seg, double offset) const;

    Topology classify() const;
    /// True when every biconnected block is a single edge or a cycle.
    bool isOneSumOfTreesAndLoops() const;

    /// BFS generations G_0 = {origin}, G_1, ... covering all vertices. Tree only.
    std::vector<std::vector<int>> childrenGenerations(int origin) const;

    double boundingBoxDiagonal() const;

private:
    LinearNetwork() = default;

    std::vector<Vec2> vertices_;
    std::vector<Segment> segments_;
    std::vector<std::vector<int>> adjacency_;
    double totalLength_ = 0.0;
};

/// Vertex-inclusive discretization: every vertex plus n_j - 1 equally spaced
/// interior points per segment, n_j = max(1, ceil(l_j / spacing)).
struct NetworkGrid {
    const LinearNetwork* net = nullptr;
    double spacing = 0.0;
    std::vector<NetPoint> points;
    std::vector<int> vertexIndex;              ///< grid index of each vertex
    std::vector<std::vector<int>> perSegment;  ///< grid indices along each segment, endpoints included

    int size() const { return static_cast<int>(points.size()); }

    /// Nearest grid point to u under geodesic distance (always on u's segment
    /// since vertices are grid points). On an exact midpoint tie *secondOut is
    /// set to the other neighbour, otherwise to -1.
    int nearest(NetPoint u, int* secondOut = nullptr) const;
};

NetworkGrid make_grid(const LinearNetwork& net, double spacing);

}  // namespace netcox
