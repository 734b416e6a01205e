#include "dynamo/initial_graph.hpp"

#include <algorithm>
#include <random>

namespace dynamo {

namespace {

std::vector<SpherePoint> straight_segment(cplx a, cplx b, double step) {
    double len = std::abs(b - a);
    int n = std::max(2, static_cast<int>(std::ceil(len / step)));
    std::vector<SpherePoint> out;
    for (int i = 0; i <= n; ++i) out.emplace_back(a + (b - a) * (static_cast<double>(i) / n));
    return out;
}

std::vector<SpherePoint> circle_arc(double th0, double th1, double step) {
    double len = std::abs(th1 - th0);
    int n = std::max(2, static_cast<int>(std::ceil(len / step)));
    std::vector<SpherePoint> out;
    for (int i = 0; i <= n; ++i)
        out.emplace_back(std::exp(cplx(0, th0 + (th1 - th0) * i / n)));
    return out;
}

// Traced internal ray as an edge polyline from the landing point to the
// center (or reversed), with its annotation.
struct RayArc {
    std::vector<SpherePoint> polyline;
    RaySegment seg;
};

RayArc landed_ray(const GraphContext& ctx, int comp_id, double angle, const SpherePoint& snap_to,
                  bool center_first) {
    InternalRay ray = ctx.bott->traced_landed_ray(comp_id, angle, ctx.cfg.land_tol, ctx.cfg.ray_step);
    if (chordal(ray.landing_point, snap_to) > 1e-4)
        throw PostconditionFailed("catalog ray does not land at the expected vertex");
    RayArc out;
    if (center_first) {
        out.polyline = ray.polyline;
        out.polyline.push_back(snap_to);
        out.seg = {comp_id, ray.angle, 0, static_cast<int>(out.polyline.size()) - 1, true};
    } else {
        out.polyline.push_back(snap_to);
        for (size_t i = ray.polyline.size(); i-- > 0;) out.polyline.push_back(ray.polyline[i]);
        out.seg = {comp_id, ray.angle, 0, static_cast<int>(out.polyline.size()) - 1, false};
    }
    return out;
}

// Smooth seeded normal perturbation of the samples not covered by ray
// annotations. This realizes the countable-avoidance isotopy as bounded
// random jitter and keeps the initial graph off the invariant set, so the
// pullback iteration has a visible transient.
void jitter_free_samples(Edge& e, double amplitude, unsigned seed) {
    size_t L = e.polyline.size();
    if (L < 5) return;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double a1 = uni(rng), a2 = uni(rng), a3 = uni(rng);
    std::vector<char> frozen(L, 0);
    for (const auto& rs : e.rays)
        for (int i = rs.from_index; i <= rs.to_index && i < static_cast<int>(L); ++i)
            frozen[static_cast<size_t>(i)] = 1;
    for (size_t i = 1; i + 1 < L; ++i) {
        if (frozen[i]) continue;
        double t = static_cast<double>(i) / (L - 1);
        double h = a1 * std::sin(2 * M_PI * t) + a2 * std::sin(4 * M_PI * t) +
                   0.5 * a3 * std::sin(6 * M_PI * t);
        double bump = std::sin(M_PI * t);
        // taper near frozen neighbors so rays connect smoothly
        int free_run = 0;
        for (size_t k = i; k > 0 && !frozen[k] && free_run < 8; --k) free_run++;
        int fwd = 0;
        for (size_t k = i; k + 1 < L && !frozen[k] && fwd < 8; ++k) fwd++;
        double taper = std::min(1.0, std::min(free_run, fwd) / 8.0);
        bool inv = home_inverted(e.polyline[i]);
        cplx c = chart_coord(e.polyline[i], inv);
        cplx tang = chart_coord(e.polyline[i + 1], inv) - chart_coord(e.polyline[i - 1], inv);
        double tn = std::abs(tang);
        if (tn < 1e-14) continue;
        cplx nrm = tang / tn * cplx(0, 1);
        c += nrm * (amplitude * bump * h * taper) * (1.0 + std::norm(c)) / 2.0;
        e.polyline[i] = from_chart(c, inv);
    }
}

int center_vertex(PlanarGraph& G, const GraphContext& ctx, const SpherePoint& p) {
    int id = G.find_vertex(p, 1e-9);
    if (id >= 0) return id;
    return G.add_vertex(p, VertexKind::FatouCenter);
}

int julia_vertex(PlanarGraph& G, const SpherePoint& p) {
    int id = G.find_vertex(p, 1e-9);
    if (id >= 0) return id;
    return G.add_vertex(p, VertexKind::JuliaPoint);
}

int component_of_center(const GraphContext& ctx, const SpherePoint& c) {
    int id = ctx.atlas->component_near(c, 2);
    if (id < 0) throw PostconditionFailed("catalog center not found in the atlas");
    return id;
}

void mark(PlanarGraph& G, std::initializer_list<int> ids) {
    for (int id : ids) G.marked_P.push_back(id);
}

}  // namespace

CheckReport check_graph_contract(const GraphContext& ctx, const PlanarGraph& G) {
    CheckReport rep;
    rep.condition = "initial-graph-contract";
    if (!G.connected()) rep.fail(SpherePoint(0, 0), "graph is not connected");

    // (1) periodic Fatou centers are non-cut
    CutReport cuts = cut_points(G);
    for (const auto& v : G.vertices) {
        if (v.kind != VertexKind::FatouCenter) continue;
        int cid = ctx.atlas->component_at(v.pos);
        if (cid < 0 || !ctx.atlas->components[static_cast<size_t>(cid)].is_periodic()) continue;
        if (std::find(cuts.cut_vertices.begin(), cuts.cut_vertices.end(), v.id) !=
            cuts.cut_vertices.end())
            rep.fail(v.pos, "periodic Fatou center is a cut point");
    }

    // (2) Julia branch vertices outside P have at least three accesses
    for (const auto& v : G.vertices) {
        if (v.kind != VertexKind::JuliaPoint) continue;
        if (std::find(G.marked_P.begin(), G.marked_P.end(), v.id) != G.marked_P.end()) continue;
        if (G.incident_edges(v.id).size() < 3) continue;  // subdivision vertex
        try {
            AccessRecord rec = acc_estimate(*ctx.atlas, *ctx.bott, v.pos, 64, ctx.cfg.land_tol);
            if (rec.acc.size() < 3)
                rep.fail(v.pos, "branch vertex outside P with fewer than three accesses");
        } catch (const std::exception&) {
        }
    }

    // (3) rays landing at accessible marked points belong to the graph
    for (int id : G.marked_P) {
        const Vertex& v = G.vertices[static_cast<size_t>(id)];
        if (v.kind != VertexKind::JuliaPoint) continue;
        AccessRecord rec;
        try {
            rec = acc_estimate(*ctx.atlas, *ctx.bott, v.pos, 64, ctx.cfg.land_tol);
        } catch (const std::exception&) {
            continue;
        }
        for (const auto& ray : rec.acc) {
            bool present = false;
            for (const auto& e : G.edges)
                for (const auto& rs : e.rays) {
                    double d = rs.angle - ray.angle;
                    d -= std::round(d);
                    if (rs.component_id == ray.component_id && std::abs(d) < 1e-3) present = true;
                }
            if (!present) rep.fail(v.pos, "ray in Acc of a marked point is missing from the graph");
        }
        // (4) buried marked points are endpoints
        if (rec.dom.empty() && G.incident_edges(id).size() != 1)
            rep.fail(v.pos, "buried marked point is not an endpoint");
    }
    return rep;
}

PlanarGraph build_initial_graph(const GraphContext& ctx, const PostcriticalData& pcf,
                                const std::string& hint, bool check_postconditions) {
    const FatouAtlas& atlas = *ctx.atlas;
    double step = ctx.cfg.edge_step;
    PlanarGraph G;

    if (hint == "power" || hint == "power2" || hint == "power3") {
        int d = atlas.map.deg();
        int U0 = component_of_center(ctx, SpherePoint(0, 0));
        int Uinf = component_of_center(ctx, SpherePoint::infinity());
        int v0 = center_vertex(G, ctx, SpherePoint(0, 0));
        int v1 = julia_vertex(G, SpherePoint(1, 0));
        int vinf = center_vertex(G, ctx, SpherePoint::infinity());
        RayArc spoke = landed_ray(ctx, U0, 0.0, SpherePoint(1, 0), true);
        G.add_edge(v0, v1, spoke.polyline, {spoke.seg});
        RayArc ext = landed_ray(ctx, Uinf, 0.0, SpherePoint(1, 0), false);
        G.add_edge(v1, vinf, ext.polyline, {ext.seg});
        // unit circle split at the d-th roots of unity (each maps onto 1)
        std::vector<int> ring;
        for (int k = 0; k < d; ++k) {
            double th = 2 * M_PI * k / d;
            ring.push_back(k == 0 ? v1 : julia_vertex(G, SpherePoint(std::exp(cplx(0, th)))));
        }
        for (int k = 0; k < d; ++k) {
            double th0 = 2 * M_PI * k / d, th1 = 2 * M_PI * (k + 1) / d;
            auto pl = circle_arc(th0, th1, std::min(step, 2.4e-4));
            pl.front() = G.vertices[static_cast<size_t>(ring[static_cast<size_t>(k)])].pos;
            pl.back() = G.vertices[static_cast<size_t>(ring[static_cast<size_t>((k + 1) % d)])].pos;
            G.add_edge(ring[static_cast<size_t>(k)], ring[static_cast<size_t>((k + 1) % d)], pl);
        }
        if (d == 2) {
            mark(G, {v0, v1, vinf});
        } else {
            mark(G, {v0, v1, vinf});
        }
    } else if (hint == "chebyshev") {
        int Uinf = component_of_center(ctx, SpherePoint::infinity());
        int vm2 = julia_vertex(G, SpherePoint(-2, 0));
        int v0 = julia_vertex(G, SpherePoint(0, 0));
        int v2 = julia_vertex(G, SpherePoint(2, 0));
        int vinf = center_vertex(G, ctx, SpherePoint::infinity());
        G.add_edge(vm2, v0, straight_segment(cplx(-2, 0), cplx(0, 0), step));
        G.add_edge(v0, v2, straight_segment(cplx(0, 0), cplx(2, 0), step));
        RayArc ext = landed_ray(ctx, Uinf, 0.0, SpherePoint(2, 0), false);
        G.add_edge(v2, vinf, ext.polyline, {ext.seg});
        mark(G, {v2, vinf});
    } else if (hint == "basilica") {
        double alpha = (1.0 - std::sqrt(5.0)) / 2.0;
        double beta = (1.0 + std::sqrt(5.0)) / 2.0;
        int U0 = component_of_center(ctx, SpherePoint(0, 0));
        int Um1 = component_of_center(ctx, SpherePoint(-1, 0));
        int Uinf = component_of_center(ctx, SpherePoint::infinity());
        int v0 = center_vertex(G, ctx, SpherePoint(0, 0));
        int vm1 = center_vertex(G, ctx, SpherePoint(-1, 0));
        int va = julia_vertex(G, SpherePoint(alpha, 0));
        int vb = julia_vertex(G, SpherePoint(beta, 0));
        int vinf = center_vertex(G, ctx, SpherePoint::infinity());

        RayArc r1 = landed_ray(ctx, Um1, 0.0, SpherePoint(alpha, 0), true);
        G.add_edge(vm1, va, r1.polyline, {r1.seg});
        RayArc r2 = landed_ray(ctx, U0, 0.0, SpherePoint(alpha, 0), false);
        G.add_edge(va, v0, r2.polyline, {r2.seg});

        // the arc through the touching chain toward beta, deliberately
        // perturbed off the invariant set (seeded)
        Edge chain;
        chain.polyline = straight_segment(cplx(0, 0), cplx(beta, 0), step);
        jitter_free_samples(chain, 0.035, ctx.cfg.rng_seed + 17u);
        G.add_edge(v0, vb, chain.polyline, {});

        RayArc ext = landed_ray(ctx, Uinf, 0.0, SpherePoint(beta, 0), false);
        G.add_edge(vb, vinf, ext.polyline, {ext.seg});
        RayArc ra1 = landed_ray(ctx, Uinf, 1.0 / 3.0, SpherePoint(alpha, 0), false);
        G.add_edge(va, vinf, ra1.polyline, {ra1.seg});
        RayArc ra2 = landed_ray(ctx, Uinf, 2.0 / 3.0, SpherePoint(alpha, 0), false);
        G.add_edge(va, vinf, ra2.polyline, {ra2.seg});
        mark(G, {v0, vm1, va, vb, vinf});
    } else if (hint == "airplane") {
        // superattracting 3-cycle 0 -> c -> v -> 0 on the real axis
        cplx c(0, 0);
        for (auto& [cp, dl] : pcf.critical_points)
            if (!cp.is_inf()) c = atlas.map.evaluate(cp).z;
        double cr = c.real();
        double v = cr * cr + cr;
        double beta = (1.0 + std::sqrt(1.0 - 4.0 * cr)) / 2.0;
        int Uinf = component_of_center(ctx, SpherePoint::infinity());

        int vc = center_vertex(G, ctx, SpherePoint(cr, 0));
        int v0 = center_vertex(G, ctx, SpherePoint(0, 0));
        int vv = center_vertex(G, ctx, SpherePoint(v, 0));
        int vb = julia_vertex(G, SpherePoint(beta, 0));
        int vinf = center_vertex(G, ctx, SpherePoint::infinity());

        Edge seg1;
        seg1.polyline = straight_segment(cplx(cr, 0), cplx(0, 0), step);
        seg1 = first_last(ctx, seg1, atlas.min_diameter);
        G.add_edge(vc, v0, seg1.polyline, seg1.rays);

        Edge seg2;
        seg2.polyline = straight_segment(cplx(0, 0), cplx(v, 0), step);
        seg2 = first_last(ctx, seg2, atlas.min_diameter);
        G.add_edge(v0, vv, seg2.polyline, seg2.rays);

        Edge seg3;
        seg3.polyline = straight_segment(cplx(v, 0), cplx(beta, 0), step);
        seg3 = first_last(ctx, seg3, atlas.min_diameter);
        jitter_free_samples(seg3, 0.03, ctx.cfg.rng_seed + 29u);
        G.add_edge(vv, vb, seg3.polyline, seg3.rays);

        RayArc ext = landed_ray(ctx, Uinf, 0.0, SpherePoint(beta, 0), false);
        G.add_edge(vb, vinf, ext.polyline, {ext.seg});
        mark(G, {vc, v0, vv, vb, vinf});
    } else if (hint == "newton-cubic") {
        cplx w = std::exp(cplx(0, 2 * M_PI / 3));
        std::vector<SpherePoint> roots{SpherePoint(1, 0), SpherePoint(w), SpherePoint(std::conj(w))};
        int vinf = julia_vertex(G, SpherePoint::infinity());
        for (const auto& r : roots) {
            int U = component_of_center(ctx, r);
            int vr = center_vertex(G, ctx, r);
            RayArc ray = landed_ray(ctx, U, 0.0, SpherePoint::infinity(), true);
            G.add_edge(vr, vinf, ray.polyline, {ray.seg});
        }
        mark(G, {0, 1, 2, 3});
    } else if (hint == "generic-polynomial") {
        throw std::invalid_argument("build_initial_graph: generic construction is catalog-assisted only");
    } else {
        throw std::invalid_argument("build_initial_graph: unknown catalog hint " + hint);
    }

    if (check_postconditions) {
        CheckReport rep = check_graph_contract(ctx, G);
        if (!rep.pass) {
            std::string msg = "build_initial_graph: contract failed:";
            for (auto& [where, why] : rep.witnesses) msg += " " + why + ";";
            throw PostconditionFailed(msg);
        }
    }
    return G;
}

}  // namespace dynamo
