#include "dynamo/graph.hpp"

#include <algorithm>
#include <functional>

namespace dynamo {

int PlanarGraph::add_vertex(SpherePoint p, VertexKind kind) {
    Vertex v;
    v.id = static_cast<int>(vertices.size());
    v.pos = p;
    v.kind = kind;
    vertices.push_back(v);
    return v.id;
}

int PlanarGraph::add_edge(int v0, int v1, std::vector<SpherePoint> polyline,
                          std::vector<RaySegment> rays) {
    Edge e;
    e.id = static_cast<int>(edges.size());
    e.v0 = v0;
    e.v1 = v1;
    e.polyline = std::move(polyline);
    e.rays = std::move(rays);
    edges.push_back(std::move(e));
    return static_cast<int>(edges.size()) - 1;
}

int PlanarGraph::find_vertex(const SpherePoint& p, double snap) const {
    int best = -1;
    double bd = snap;
    for (const auto& v : vertices) {
        double d = chordal(v.pos, p);
        if (d <= bd) {
            bd = d;
            best = v.id;
        }
    }
    return best;
}

std::vector<int> PlanarGraph::incident_edges(int vertex) const {
    std::vector<int> out;
    for (const auto& e : edges)
        if (e.v0 == vertex || e.v1 == vertex) out.push_back(e.id);
    return out;
}

bool PlanarGraph::connected() const {
    if (vertices.empty()) return true;
    std::vector<bool> seen(vertices.size(), false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const auto& e : edges) {
            int other = -1;
            if (e.v0 == v) other = e.v1;
            else if (e.v1 == v) other = e.v0;
            if (other >= 0 && !seen[static_cast<size_t>(other)]) {
                seen[static_cast<size_t>(other)] = true;
                stack.push_back(other);
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

std::vector<std::vector<SpherePoint>> PlanarGraph::polylines() const {
    std::vector<std::vector<SpherePoint>> out;
    for (const auto& e : edges) out.push_back(e.polyline);
    return out;
}

std::vector<SpherePoint> PlanarGraph::all_points() const {
    std::vector<SpherePoint> out;
    for (const auto& e : edges) out.insert(out.end(), e.polyline.begin(), e.polyline.end());
    return out;
}

double PlanarGraph::total_length() const {
    double s = 0.0;
    for (const auto& e : edges) s += polyline_length(e.polyline);
    return s;
}

int valence(const PlanarGraph& G, const SpherePoint& x, double snap) {
    int germs = 0;
    bool on_graph = false;
    for (const auto& e : G.edges) {
        if (e.polyline.empty()) continue;
        bool at_start = chordal(e.polyline.front(), x) <= snap;
        bool at_end = chordal(e.polyline.back(), x) <= snap;
        if (at_start) germs++;
        if (at_end) germs++;
        if (at_start || at_end) {
            on_graph = true;
            continue;
        }
        if (dist_to_polyline(x, e.polyline) <= snap) {
            germs += 2;
            on_graph = true;
        }
    }
    if (!on_graph) throw NotOnGraph("valence: point not on the graph");
    return germs;
}

CutReport cut_points(const PlanarGraph& G) {
    CutReport rep;
    int n = static_cast<int>(G.vertices.size());
    if (n == 0) return rep;

    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<size_t>(n));
    for (const auto& e : G.edges) {
        adj[static_cast<size_t>(e.v0)].push_back({e.v1, e.id});
        adj[static_cast<size_t>(e.v1)].push_back({e.v0, e.id});
    }

    std::vector<int> disc(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0);
    std::vector<bool> art(static_cast<size_t>(n), false);
    int timer = 0;

    struct Frame {
        int v;
        int parent_edge;
        size_t idx;
        int children;
    };
    for (int root = 0; root < n; ++root) {
        if (disc[static_cast<size_t>(root)] >= 0) continue;
        std::vector<Frame> stack{{root, -1, 0, 0}};
        disc[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = timer++;
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.idx < adj[static_cast<size_t>(f.v)].size()) {
                auto [u, eid] = adj[static_cast<size_t>(f.v)][f.idx++];
                if (eid == f.parent_edge) continue;
                if (disc[static_cast<size_t>(u)] < 0) {
                    disc[static_cast<size_t>(u)] = low[static_cast<size_t>(u)] = timer++;
                    f.children++;
                    stack.push_back({u, eid, 0, 0});
                } else {
                    low[static_cast<size_t>(f.v)] =
                        std::min(low[static_cast<size_t>(f.v)], disc[static_cast<size_t>(u)]);
                }
            } else {
                int v = f.v, pe = f.parent_edge, children = f.children;
                stack.pop_back();
                if (!stack.empty()) {
                    Frame& p = stack.back();
                    low[static_cast<size_t>(p.v)] =
                        std::min(low[static_cast<size_t>(p.v)], low[static_cast<size_t>(v)]);
                    if (low[static_cast<size_t>(v)] >= disc[static_cast<size_t>(p.v)] &&
                        (stack.size() > 1 || p.children > 1))
                        art[static_cast<size_t>(p.v)] = true;
                    if (low[static_cast<size_t>(v)] > disc[static_cast<size_t>(p.v)])
                        rep.bridge_edges.push_back(pe);
                } else if (children > 1) {
                    art[static_cast<size_t>(v)] = true;
                }
            }
        }
    }
    for (int v = 0; v < n; ++v)
        if (art[static_cast<size_t>(v)]) rep.cut_vertices.push_back(v);
    std::sort(rep.bridge_edges.begin(), rep.bridge_edges.end());
    return rep;
}

}  // namespace dynamo
