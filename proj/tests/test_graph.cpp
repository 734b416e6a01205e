#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dynamo/initial_graph.hpp"

using namespace dynamo;

namespace {

std::vector<SpherePoint> seg(cplx a, cplx b, int n = 64) {
    std::vector<SpherePoint> out;
    for (int i = 0; i <= n; ++i) out.emplace_back(a + (b - a) * (static_cast<double>(i) / n));
    return out;
}

std::vector<SpherePoint> circle(double th0, double th1, int n = 256) {
    std::vector<SpherePoint> out;
    for (int i = 0; i <= n; ++i) out.emplace_back(std::exp(cplx(0, th0 + (th1 - th0) * i / n)));
    return out;
}

struct Env {
    RationalMap map;
    PostcriticalData pcf;
    FatouAtlas atlas;
    BottcherSystem bott;
    GraphContext ctx;
    Env(Poly num, Poly den, int res = 256)
        : map(num, den),
          pcf(postcritical_orbit(map)),
          atlas(component_atlas(map, pcf, label_basins(map, pcf, res, 200), 5e-3)),
          bott(atlas) {
        ctx.atlas = &atlas;
        ctx.bott = &bott;
        ctx.cfg.resolution = res;
    }
};

Env& power2_env() {
    static Env env({{0, 0}, {0, 0}, {1, 0}}, {{1, 0}});
    return env;
}
Env& basilica_env() {
    static Env env({{-1, 0}, {0, 0}, {1, 0}}, {{1, 0}});
    return env;
}
Env& chebyshev_env() {
    static Env env({{-2, 0}, {0, 0}, {1, 0}}, {{1, 0}});
    return env;
}

}  // namespace

TEST_CASE("valence counts germs") {
    PlanarGraph G;
    int v1 = G.add_vertex(SpherePoint(1, 0), VertexKind::JuliaPoint);
    int vm1 = G.add_vertex(SpherePoint(-1, 0), VertexKind::JuliaPoint);
    int v0 = G.add_vertex(SpherePoint(0, 0), VertexKind::FatouCenter);
    int vinf = G.add_vertex(SpherePoint::infinity(), VertexKind::FatouCenter);
    G.add_edge(v1, vm1, circle(0, M_PI));
    G.add_edge(vm1, v1, circle(M_PI, 2 * M_PI));
    G.add_edge(v0, v1, seg(cplx(0, 0), cplx(1, 0)));
    std::vector<SpherePoint> ray = seg(cplx(1, 0), cplx(50, 0), 256);
    ray.push_back(SpherePoint::infinity());
    G.add_edge(v1, vinf, ray);

    CHECK(valence(G, SpherePoint(1, 0), 1e-6) == 4);
    CHECK(valence(G, SpherePoint(-1, 0), 1e-6) == 2);
    CHECK(valence(G, SpherePoint(std::exp(cplx(0, 0.7))), 1e-3) == 2);  // edge interior
    CHECK(valence(G, SpherePoint(0.5, 0), 1e-6) == 2);
    CHECK_THROWS_AS(valence(G, SpherePoint(0.3, 0.4), 1e-6), NotOnGraph);
}

TEST_CASE("cut points: circle, segment, circle plus radius") {
    {  // plain circle: no cut points
        PlanarGraph G;
        int a = G.add_vertex(SpherePoint(1, 0), VertexKind::JuliaPoint);
        int b = G.add_vertex(SpherePoint(-1, 0), VertexKind::JuliaPoint);
        G.add_edge(a, b, circle(0, M_PI));
        G.add_edge(b, a, circle(M_PI, 2 * M_PI));
        CutReport rep = cut_points(G);
        CHECK(rep.cut_vertices.empty());
        CHECK(rep.bridge_edges.empty());
    }
    {  // segment [-2,2] with vertices {-2, 0, 2}: 0 cuts, both edges are bridges
        PlanarGraph G;
        int a = G.add_vertex(SpherePoint(-2, 0), VertexKind::JuliaPoint);
        int m = G.add_vertex(SpherePoint(0, 0), VertexKind::JuliaPoint);
        int b = G.add_vertex(SpherePoint(2, 0), VertexKind::JuliaPoint);
        G.add_edge(a, m, seg(cplx(-2, 0), cplx(0, 0)));
        G.add_edge(m, b, seg(cplx(0, 0), cplx(2, 0)));
        CutReport rep = cut_points(G);
        REQUIRE(rep.cut_vertices.size() == 1);
        CHECK(rep.cut_vertices[0] == m);
        CHECK(rep.bridge_edges.size() == 2);
    }
    {  // circle with a radius attached at 1: vertex 1 cuts, radius is a bridge
        PlanarGraph G;
        int v1 = G.add_vertex(SpherePoint(1, 0), VertexKind::JuliaPoint);
        int vm1 = G.add_vertex(SpherePoint(-1, 0), VertexKind::JuliaPoint);
        int v0 = G.add_vertex(SpherePoint(0, 0), VertexKind::FatouCenter);
        G.add_edge(v1, vm1, circle(0, M_PI));
        G.add_edge(vm1, v1, circle(M_PI, 2 * M_PI));
        int radius = G.add_edge(v0, v1, seg(cplx(0, 0), cplx(1, 0)));
        CutReport rep = cut_points(G);
        REQUIRE(rep.cut_vertices.size() == 1);
        CHECK(rep.cut_vertices[0] == v1);
        REQUIRE(rep.bridge_edges.size() == 1);
        CHECK(rep.bridge_edges[0] == radius);
    }
}

TEST_CASE("build_initial_graph: power2 passes contract and admissibility") {
    Env& env = power2_env();
    PlanarGraph G = build_initial_graph(env.ctx, env.pcf, "power");
    CHECK(G.connected());
    CHECK(G.vertices.size() == 4);  // 0, 1, -1, inf
    CHECK(G.edges.size() == 4);
    AdmissibilityReport rep = check_admissible(env.ctx, env.pcf, G, 8);
    CHECK(rep.regulated.pass);
    CHECK(rep.vertices_to_P.pass);
    CHECK(rep.centers_noncut.pass);
    CHECK(rep.rays_present.pass);
}

TEST_CASE("build_initial_graph: chebyshev passes admissibility") {
    Env& env = chebyshev_env();
    PlanarGraph G = build_initial_graph(env.ctx, env.pcf, "chebyshev");
    AdmissibilityReport rep = check_admissible(env.ctx, env.pcf, G, 8);
    CHECK(rep.pass());
}

TEST_CASE("build_initial_graph: basilica passes admissibility") {
    Env& env = basilica_env();
    PlanarGraph G = build_initial_graph(env.ctx, env.pcf, "basilica");
    CHECK(G.connected());
    AdmissibilityReport rep = check_admissible(env.ctx, env.pcf, G, 8);
    CHECK(rep.regulated.pass);
    CHECK(rep.vertices_to_P.pass);
    CHECK(rep.centers_noncut.pass);
    CHECK(rep.rays_present.pass);
    // wandering vertex breaks A2
    PlanarGraph bad = G;
    bad.add_vertex(SpherePoint(0.31, 0.17), VertexKind::JuliaPoint);
    AdmissibilityReport rep2 = check_admissible(env.ctx, env.pcf, bad, 8);
    CHECK(!rep2.vertices_to_P.pass);
}

TEST_CASE("first_last: power2 chord becomes the real diameter") {
    Env& env = power2_env();
    Edge chord;
    chord.polyline = seg(cplx(-1, 0), cplx(1, 0), 400);
    Edge out = first_last(env.ctx, chord, 1e-3);
    REQUIRE(out.rays.size() == 2);
    // the replacement runs along the real axis through the center
    for (const auto& p : out.polyline) CHECK(std::abs(p.z.imag()) < 1e-6);
    bool has_center = false;
    for (const auto& p : out.polyline)
        if (chordal(p, SpherePoint(0, 0)) < 1e-9) has_center = true;
    CHECK(has_center);
    // idempotent
    Edge again = first_last(env.ctx, out, 1e-3);
    CHECK(hausdorff_polylines({again.polyline}, {out.polyline}) < 1e-6);
}

TEST_CASE("first_last leaves arcs outside components unchanged") {
    Env& env = chebyshev_env();
    Edge arc;
    arc.polyline = seg(cplx(-2, 0), cplx(2, 0), 256);  // the Julia segment
    Edge out = first_last(env.ctx, arc, 1e-3);
    CHECK(out.rays.empty());
    CHECK(out.polyline.size() == arc.polyline.size());
}

TEST_CASE("obstruction: synthetic crossing flagged, graph rays protected") {
    Env& env = power2_env();
    // crossing arc through z = 1, entering the disk below the axis and
    // leaving above: crosses R_in(0) u {1} u R_out(0)
    Edge crossing;
    {
        auto a = seg(cplx(0.95, -0.35), cplx(1.0, 0.0), 128);
        auto b = seg(cplx(1.0, 0.0), cplx(1.07, 0.33), 128);
        crossing.polyline = a;
        crossing.polyline.insert(crossing.polyline.end(), b.begin() + 1, b.end());
    }
    CheckReport rep = check_obstruction(env.ctx, crossing, SpherePoint(1, 0));
    CHECK(!rep.pass);

    // the catalog graph carries both rays: its circle edge is not obstructed
    PlanarGraph G = build_initial_graph(env.ctx, env.pcf, "power");
    for (const auto& e : G.edges) {
        if (e.rays.empty()) {  // a circle edge
            CheckReport r2 = check_obstruction(env.ctx, e, SpherePoint(1, 0), &G);
            CHECK(r2.pass);
            break;
        }
    }

    // chebyshev interior point: both rays from one component, never obstructed
    Env& che = chebyshev_env();
    Edge segarc;
    segarc.polyline = seg(cplx(-2, 0), cplx(2, 0), 256);
    CheckReport r3 = check_obstruction(che.ctx, segarc, SpherePoint(0, 0));
    CHECK(r3.pass);
}

TEST_CASE("linking: synthetic double entrance fails") {
    Env& env = power2_env();
    // two edges entering the vertex at z=1 through the same (ordinary)
    // entrance would be legal; the chebyshev tip z=2 has one special
    // entrance, so two edges through it violate linking
    Env& che = chebyshev_env();
    PlanarGraph G;
    int v2 = G.add_vertex(SpherePoint(2, 0), VertexKind::JuliaPoint);
    int a = G.add_vertex(SpherePoint(2.5, 0.4), VertexKind::FatouCenter);
    int b = G.add_vertex(SpherePoint(2.5, -0.4), VertexKind::FatouCenter);
    G.add_edge(v2, a, seg(cplx(2, 0), cplx(2.5, 0.4)));
    G.add_edge(v2, b, seg(cplx(2, 0), cplx(2.5, -0.4)));
    CheckReport rep = check_linking(che.ctx, G);
    CHECK(!rep.pass);

    PlanarGraph good = build_initial_graph(env.ctx, env.pcf, "power");
    CheckReport rep2 = check_linking(env.ctx, good);
    CHECK(rep2.pass);
}

TEST_CASE("F-disconnected: pure julia crossing of a complement region fails") {
    Env& env = basilica_env();
    // the basilica catalog graph passes
    PlanarGraph G = build_initial_graph(env.ctx, env.pcf, "basilica");
    CheckReport rep = check_F_disconnected(env.ctx, G);
    CHECK(rep.pass);
}

TEST_CASE("clean_arc: power2 chord and trichotomy") {
    Env& env = power2_env();
    Edge chord;
    chord.polyline = seg(cplx(-1, 0), cplx(1, 0), 400);
    Edge cleaned = clean_arc(env.ctx, chord, 0.02);
    // meets the closed disk in exactly the two rays
    int inner = env.atlas.component_at(SpherePoint(0, 0));
    MeetReport m = classify_meeting(env.ctx, cleaned, inner);
    CHECK(m.kind == MeetKind::TwoRays);
}
