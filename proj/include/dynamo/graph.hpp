#pragma once

#include "dynamo/bottcher.hpp"
#include "dynamo/config.hpp"

namespace dynamo {

enum class VertexKind { JuliaPoint, FatouCenter };

struct Vertex {
    int id = -1;
    SpherePoint pos;
    VertexKind kind = VertexKind::JuliaPoint;
};

// Polyline sub-range that runs along an internal ray.
struct RaySegment {
    int component_id = -1;
    double angle = 0.0;
    int from_index = 0;
    int to_index = 0;  // inclusive
    bool outward = true;  // polyline direction vs ray direction (center -> boundary)
};

struct Edge {
    int id = -1;
    int v0 = -1, v1 = -1;
    std::vector<SpherePoint> polyline;  // from v0 to v1
    std::vector<RaySegment> rays;
};

struct PlanarGraph {
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<int> marked_P;

    int add_vertex(SpherePoint p, VertexKind kind);
    int add_edge(int v0, int v1, std::vector<SpherePoint> polyline, std::vector<RaySegment> rays = {});
    int find_vertex(const SpherePoint& p, double snap) const;  // -1 if none
    std::vector<int> incident_edges(int vertex) const;
    bool connected() const;
    std::vector<std::vector<SpherePoint>> polylines() const;
    // all samples
    std::vector<SpherePoint> all_points() const;
    double total_length() const;
};

struct CheckReport {
    std::string condition;
    bool pass = true;
    std::vector<std::pair<SpherePoint, std::string>> witnesses;

    void fail(const SpherePoint& where, std::string why) {
        pass = false;
        witnesses.emplace_back(where, std::move(why));
    }
};

struct NotOnGraph : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Number of edge germs at x (interior points count twice).
int valence(const PlanarGraph& G, const SpherePoint& x, double snap = 1e-6);

struct CutReport {
    std::vector<int> cut_vertices;   // articulation vertices of the skeleton
    std::vector<int> bridge_edges;   // edges whose interiors are cut ranges
};
CutReport cut_points(const PlanarGraph& G);

// Shared context for the graph-level checks.
struct GraphContext {
    const FatouAtlas* atlas = nullptr;
    const BottcherSystem* bott = nullptr;
    RunConfig cfg;
};

}  // namespace dynamo
