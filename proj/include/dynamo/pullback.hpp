#pragma once

#include <map>

#include "dynamo/graph.hpp"

namespace dynamo {

struct CriticalValueOnArc : std::runtime_error {
    double t;
    CriticalValueOnArc(const std::string& m, double t_) : std::runtime_error(m), t(t_) {}
};
struct ContinuationLost : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AssemblyMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoLiftInTube : std::runtime_error {
    int edge_id;
    NoLiftInTube(const std::string& m, int e) : std::runtime_error(m), edge_id(e) {}
};

struct LiftedArc {
    int source_edge = -1;
    SpherePoint branch_start;
    std::vector<SpherePoint> polyline;
    double max_residual = 0.0;
};

struct Provenance {
    int source_edge = -1;
    int branch = 0;
};

struct PullbackGraph {
    PlanarGraph graph;
    std::map<int, Provenance> provenance;  // edge id -> lift origin
    int lifts_before_merge = 0;            // degree bookkeeping, last level
    int split_edges = 0;
};

// Newton predictor-corrector lift of one arc along the branch starting at w0
// (f(w0) = arc front). Adaptive subdivision; every sample certified against
// lift_tol.
LiftedArc lift_arc(const RationalMap& map, const std::vector<SpherePoint>& arc,
                   const SpherePoint& w0, double lift_tol = 1e-10, double step_floor = 1e-6);

// f^{-n}(G) assembled as a planar graph with provenance.
PullbackGraph pullback_graph(const RationalMap& map, const PostcriticalData& pcf,
                             const PlanarGraph& G, int n, double lift_tol = 1e-10,
                             double snap = 1e-6);

// Isotopic-lift selection: for each reference edge, the path in H inside the
// metric tube around it that best matches it; re-vertexed like G_ref.
PlanarGraph select_isotopic(const PlanarGraph& G_ref, const PullbackGraph& H, double tube_radius);

}  // namespace dynamo
