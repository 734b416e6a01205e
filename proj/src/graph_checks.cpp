#include "dynamo/checks.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace dynamo {

namespace {

// A point counts as inside a component only when its pixel is labeled with it
// and is clear of the Julia raster (Julia arcs get labeled by surrounding
// basins at finite resolution).
bool inside_component(const FatouAtlas& atlas, const SpherePoint& p, int id) {
    return atlas.component_at(p) == id && !atlas.grid.near_julia(p, 1.0);
}

double dir_angle(const SpherePoint& z, const SpherePoint& p) {
    bool inv = home_inverted(z);
    cplx d = chart_coord(p, inv) - chart_coord(z, inv);
    return std::arg(d);
}

double ang_diff(double a, double b) {
    double d = a - b;
    while (d > M_PI) d -= 2 * M_PI;
    while (d < -M_PI) d += 2 * M_PI;
    return d;
}

// true if angle a lies strictly inside the ccw interval (lo, hi)
bool in_ccw_interval(double a, double lo, double hi) {
    auto wrap = [](double x) {
        while (x < 0) x += 2 * M_PI;
        while (x >= 2 * M_PI) x -= 2 * M_PI;
        return x;
    };
    double span = wrap(hi - lo);
    double off = wrap(a - lo);
    return off > 1e-12 && off < span - 1e-12;
}

// germ directions of the arc at z: up to two angles (before/after), or one at
// an endpoint; empty when z is not on the arc
std::vector<double> arc_germs(const Edge& arc, const SpherePoint& z, double rho) {
    const auto& pl = arc.polyline;
    if (pl.size() < 2) return {};
    size_t iz = 0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < pl.size(); ++i) {
        double d = chordal(pl[i], z);
        if (d < best) {
            best = d;
            iz = i;
        }
    }
    if (best > rho) return {};
    std::vector<double> out;
    // walk backward
    for (size_t i = iz; i-- > 0;) {
        double d = chordal(pl[i], z);
        if (d >= 0.4 * rho) {
            out.push_back(dir_angle(z, pl[i]));
            break;
        }
    }
    // walk forward
    for (size_t i = iz + 1; i < pl.size(); ++i) {
        double d = chordal(pl[i], z);
        if (d >= 0.4 * rho) {
            out.push_back(dir_angle(z, pl[i]));
            break;
        }
    }
    return out;
}

bool ray_in_annotations(const Edge& e, int component, double angle, double tol = 2e-5) {
    for (const auto& r : e.rays) {
        double d = r.angle - angle;
        d -= std::round(d);
        if (r.component_id == component && std::abs(d) < tol) return true;
    }
    return false;
}

bool ray_in_graph(const PlanarGraph& G, int component, double angle, double tol = 2e-5) {
    for (const auto& e : G.edges)
        if (ray_in_annotations(e, component, angle, tol)) return true;
    return false;
}

}  // namespace

CheckReport check_obstruction(const GraphContext& ctx, const Edge& arc, const SpherePoint& z,
                              const PlanarGraph* host) {
    CheckReport rep;
    rep.condition = "no-obstruction";
    AccessRecord rec;
    try {
        rec = acc_estimate(*ctx.atlas, *ctx.bott, z, 64, ctx.cfg.land_tol);
    } catch (const std::exception& e) {
        throw AccessUnresolved(e.what());
    }
    if (rec.acc.size() < 2) return rep;  // at most one ray: only special entrances

    struct RayDir {
        double dir;
        int comp;
        double angle;
    };
    std::vector<RayDir> rays;
    for (const auto& r : rec.acc) rays.push_back({dir_angle(z, r.approach), r.component_id, r.angle});
    std::sort(rays.begin(), rays.end(), [](const RayDir& a, const RayDir& b) { return a.dir < b.dir; });

    double rho = std::max(0.02, 6.0 * ctx.atlas->grid.pixel_size(z));
    std::vector<double> germs = arc_germs(arc, z, rho);
    if (germs.empty()) return rep;
    bool interior = germs.size() == 2;

    // germs running along a ray are at entrance boundaries, not inside
    auto along_ray = [&](double a) {
        for (const auto& r : rays)
            if (std::abs(ang_diff(a, r.dir)) < 0.15) return true;
        return false;
    };

    size_t n = rays.size();
    for (size_t i = 0; i < n; ++i) {
        const RayDir& r1 = rays[i];
        const RayDir& r2 = rays[(i + 1) % n];
        if (r1.comp == r2.comp) continue;  // special entrance
        bool protected_pair =
            ray_in_annotations(arc, r1.comp, r1.angle) || ray_in_annotations(arc, r2.comp, r2.angle);
        if (host && !protected_pair)
            protected_pair =
                ray_in_graph(*host, r1.comp, r1.angle) || ray_in_graph(*host, r2.comp, r2.angle);
        if (protected_pair) continue;

        int inE = 0;
        for (double a : germs)
            if (!along_ray(a) && in_ccw_interval(a, r1.dir, r2.dir)) inE++;
        if (interior) {
            if (inE == 1) rep.fail(z, "arc crosses an ordinary entrance ray pair");
        } else {
            if (inE == 1) rep.fail(z, "arc terminates through an ordinary entrance");
        }
    }
    return rep;
}

CheckReport check_linking(const GraphContext& ctx, const PlanarGraph& G) {
    CheckReport rep;
    rep.condition = "linking";
    for (const auto& v : G.vertices) {
        if (v.kind != VertexKind::JuliaPoint) continue;
        AccessRecord rec;
        try {
            rec = acc_estimate(*ctx.atlas, *ctx.bott, v.pos, 64, ctx.cfg.land_tol);
        } catch (const std::exception& e) {
            throw AccessUnresolved(e.what());
        }
        auto incident = G.incident_edges(v.id);
        if (rec.dom.empty()) {
            if (incident.size() != 1) rep.fail(v.pos, "buried vertex is not an endpoint");
            continue;
        }
        if (rec.acc.empty()) continue;

        struct RayDir {
            double dir;
            int comp;
        };
        std::vector<RayDir> rays;
        for (const auto& r : rec.acc) rays.push_back({dir_angle(v.pos, r.approach), r.component_id});
        std::sort(rays.begin(), rays.end(),
                  [](const RayDir& a, const RayDir& b) { return a.dir < b.dir; });
        size_t n = rays.size();

        double rho = std::max(0.02, 6.0 * ctx.atlas->grid.pixel_size(v.pos));
        std::vector<int> entrance_count(n, 0);
        for (int eid : incident) {
            const Edge& e = G.edges[static_cast<size_t>(eid)];
            // germ direction from the vertex end of this edge
            const auto& pl = e.polyline;
            bool from_start = e.v0 == v.id;
            double a = 0;
            bool have = false;
            if (from_start) {
                for (size_t i = 1; i < pl.size(); ++i)
                    if (chordal(pl[i], v.pos) >= 0.4 * rho) {
                        a = dir_angle(v.pos, pl[i]);
                        have = true;
                        break;
                    }
            }
            if (e.v1 == v.id && !have) {
                for (size_t i = pl.size(); i-- > 0;)
                    if (chordal(pl[i], v.pos) >= 0.4 * rho) {
                        a = dir_angle(v.pos, pl[i]);
                        have = true;
                        break;
                    }
            }
            if (!have) continue;
            bool along = false;
            for (const auto& r : rays)
                if (std::abs(ang_diff(a, r.dir)) < 0.15) along = true;
            if (along) continue;
            if (n == 1) {
                entrance_count[0]++;
                continue;
            }
            for (size_t i = 0; i < n; ++i)
                if (in_ccw_interval(a, rays[i].dir, rays[(i + 1) % n].dir)) entrance_count[i]++;
        }
        for (size_t i = 0; i < n; ++i) {
            bool special = n == 1 || rays[i].comp == rays[(i + 1) % n].comp;
            if (special && entrance_count[i] >= 2)
                rep.fail(v.pos, "special entrance carries two or more edges");
        }
    }
    return rep;
}

namespace {

struct MemberRun {
    size_t a = 0, b = 0;  // inclusive sample range inside the component
};

std::vector<MemberRun> member_runs(const GraphContext& ctx, const std::vector<SpherePoint>& pl,
                                   int comp_id) {
    std::vector<MemberRun> runs;
    bool in = false;
    MemberRun cur;
    for (size_t i = 0; i < pl.size(); ++i) {
        bool m = inside_component(*ctx.atlas, pl[i], comp_id);
        if (m && !in) {
            cur.a = i;
            in = true;
        }
        if (!m && in) {
            cur.b = i - 1;
            runs.push_back(cur);
            in = false;
        }
    }
    if (in) {
        cur.b = pl.size() - 1;
        runs.push_back(cur);
    }
    // merge runs separated by tiny gaps
    std::vector<MemberRun> merged;
    for (const auto& r : runs) {
        if (!merged.empty() && r.a - merged.back().b <= 3) merged.back().b = r.b;
        else merged.push_back(r);
    }
    return merged;
}

// bisect the boundary crossing between an outside and an inside sample;
// returns a point just inside
SpherePoint refine_entry(const GraphContext& ctx, const SpherePoint& outside,
                         const SpherePoint& inside, int comp_id) {
    bool inv = home_inverted(inside);
    cplx a = chart_coord(outside, inv), b = chart_coord(inside, inv);
    for (int it = 0; it < 40; ++it) {
        cplx m = 0.5 * (a + b);
        if (inside_component(*ctx.atlas, from_chart(m, inv), comp_id)) b = m;
        else a = m;
        if (std::abs(a - b) < 1e-12) break;
    }
    return from_chart(b, inv);
}

}  // namespace

Edge first_last(const GraphContext& ctx, const Edge& arc_in, double eps_min) {
    const FatouAtlas& atlas = *ctx.atlas;
    const BottcherSystem& bott = *ctx.bott;

    std::vector<const FatouComponent*> comps;
    for (const auto& c : atlas.components)
        if (c.diameter >= eps_min && bott.chart(c.id).usable) comps.push_back(&c);
    std::sort(comps.begin(), comps.end(),
              [](const FatouComponent* a, const FatouComponent* b) {
                  return a->diameter > b->diameter;
              });

    Edge arc = arc_in;
    for (const auto* comp : comps) {
        auto runs = member_runs(ctx, arc.polyline, comp->id);
        if (runs.empty()) continue;
        size_t a = runs.front().a, b = runs.back().b;
        if (a == b) continue;  // single-sample touch: the one-point case

        // skip when the meeting is already the two annotated rays of this
        // component (keeps the operation idempotent)
        {
            bool covered = !arc.rays.empty();
            for (size_t i = a; i <= b && covered; ++i) {
                if (!inside_component(atlas, arc.polyline[i], comp->id)) continue;
                bool in_ray = false;
                for (const auto& rs : arc.rays)
                    if (rs.component_id == comp->id && static_cast<int>(i) >= rs.from_index &&
                        static_cast<int>(i) <= rs.to_index)
                        in_ray = true;
                covered = in_ray;
            }
            if (covered && !arc.rays.empty()) continue;
        }

        // entry/exit points just inside the component
        SpherePoint z_in = arc.polyline[a];
        if (a > 0) z_in = refine_entry(ctx, arc.polyline[a - 1], arc.polyline[a], comp->id);
        SpherePoint z_out = arc.polyline[b];
        if (b + 1 < arc.polyline.size())
            z_out = refine_entry(ctx, arc.polyline[b + 1], arc.polyline[b], comp->id);

        double th_in, th_out;
        try {
            th_in = std::arg(bott.value(comp->id, z_in)) / (2 * M_PI);
            th_out = std::arg(bott.value(comp->id, z_out)) / (2 * M_PI);
        } catch (const std::exception& e) {
            throw LandingFailure(std::string("first_last: angle extraction failed: ") + e.what());
        }
        th_in -= std::floor(th_in);
        th_out -= std::floor(th_out);

        InternalRay r_in, r_out;
        try {
            r_in = bott.traced_landed_ray(comp->id, th_in, ctx.cfg.land_tol, ctx.cfg.ray_step);
            r_out = bott.traced_landed_ray(comp->id, th_out, ctx.cfg.land_tol, ctx.cfg.ray_step);
        } catch (const NotCertified& e) {
            throw LandingFailure(e.what());
        }

        // splice: prefix + (landing -> center) + (center -> landing) + suffix
        Edge out;
        out.id = arc.id;
        out.v0 = arc.v0;
        out.v1 = arc.v1;
        std::vector<SpherePoint> pl;
        std::vector<RaySegment> rays;
        auto copy_old_rays = [&](size_t upto_excl, int offset) {
            for (const auto& rs : arc.rays)
                if (rs.to_index < static_cast<int>(upto_excl))
                    rays.push_back({rs.component_id, rs.angle, rs.from_index + offset,
                                    rs.to_index + offset, rs.outward});
        };
        copy_old_rays(a, 0);
        for (size_t i = 0; i < a; ++i) pl.push_back(arc.polyline[i]);

        int rin_from = static_cast<int>(pl.size());
        pl.push_back(r_in.landing_point);
        for (size_t i = r_in.polyline.size(); i-- > 0;) pl.push_back(r_in.polyline[i]);
        rays.push_back({comp->id, th_in, rin_from, static_cast<int>(pl.size()) - 1, false});

        int rout_from = static_cast<int>(pl.size());
        for (size_t i = 1; i < r_out.polyline.size(); ++i) pl.push_back(r_out.polyline[i]);
        pl.push_back(r_out.landing_point);
        rays.push_back({comp->id, th_out, rout_from, static_cast<int>(pl.size()) - 1, true});

        int offset = static_cast<int>(pl.size()) - static_cast<int>(b) - 1;
        for (size_t i = b + 1; i < arc.polyline.size(); ++i) pl.push_back(arc.polyline[i]);
        for (const auto& rs : arc.rays)
            if (rs.from_index > static_cast<int>(b))
                rays.push_back({rs.component_id, rs.angle, rs.from_index + offset,
                                rs.to_index + offset, rs.outward});

        out.polyline = std::move(pl);
        out.rays = std::move(rays);
        arc = std::move(out);
    }
    return arc;
}

MeetReport classify_meeting(const GraphContext& ctx, const Edge& arc, int component_id) {
    const FatouAtlas& atlas = *ctx.atlas;
    MeetReport rep;

    // contact samples: inside the component or within a pixel of its raster
    std::vector<char> contact(arc.polyline.size(), 0);
    for (size_t i = 0; i < arc.polyline.size(); ++i) {
        const SpherePoint& p = arc.polyline[i];
        if (inside_component(atlas, p, component_id)) {
            contact[i] = 1;
            continue;
        }
        double px = atlas.grid.pixel_size(p);
        auto near_ids = atlas.components_touching(p, 1.2 * px);
        if (std::find(near_ids.begin(), near_ids.end(), component_id) != near_ids.end())
            contact[i] = 1;
    }
    std::vector<std::pair<size_t, size_t>> runs;
    bool in = false;
    size_t a = 0;
    for (size_t i = 0; i < contact.size(); ++i) {
        if (contact[i] && !in) {
            a = i;
            in = true;
        }
        if (!contact[i] && in) {
            if (!runs.empty() && a - runs.back().second <= 4) runs.back().second = i - 1;
            else runs.push_back({a, i - 1});
            in = false;
        }
    }
    if (in) {
        if (!runs.empty() && a - runs.back().second <= 4) runs.back().second = contact.size() - 1;
        else runs.push_back({a, contact.size() - 1});
    }

    if (runs.empty()) {
        rep.kind = MeetKind::Empty;
        return rep;
    }

    // annotated rays of this component on the arc
    int nann = 0;
    for (const auto& rs : arc.rays)
        if (rs.component_id == component_id) nann++;
    if (nann >= 1) {
        // meeting should be exactly the closed ray pair through the center
        rep.kind = nann == 2 ? MeetKind::TwoRays : MeetKind::Other;
        if (runs.size() == 1 && nann == 2) return rep;
        if (nann == 2 && runs.size() > 1) rep.kind = MeetKind::Other;
        return rep;
    }

    double diam_run_max = 0.0;
    for (auto& [ra, rb] : runs) {
        std::vector<SpherePoint> pts(arc.polyline.begin() + static_cast<long>(ra),
                                     arc.polyline.begin() + static_cast<long>(rb) + 1);
        diam_run_max = std::max(diam_run_max, diameter(pts));
    }
    double px = atlas.grid.pixel_size(arc.polyline[runs[0].first]);
    if (runs.size() == 1 && diam_run_max <= 4.0 * px) {
        rep.kind = MeetKind::OnePoint;
        return rep;
    }
    if (runs.size() == 2 && diam_run_max <= 4.0 * px) {
        // exceptional two-point case: a smaller companion component must carry
        // rays landing at both contact points
        const auto& comp = atlas.components[static_cast<size_t>(component_id)];
        SpherePoint x = arc.polyline[runs[0].first];
        SpherePoint y = arc.polyline[runs[1].first];
        for (const auto& rs : arc.rays) {
            if (rs.component_id == component_id) continue;
            const auto& other = atlas.components[static_cast<size_t>(rs.component_id)];
            if (other.diameter > comp.diameter) continue;
            const SpherePoint& lp = rs.outward
                                        ? arc.polyline[static_cast<size_t>(rs.to_index)]
                                        : arc.polyline[static_cast<size_t>(rs.from_index)];
            if (chordal(lp, x) < 6.0 * px || chordal(lp, y) < 6.0 * px) {
                rep.kind = MeetKind::TwoPointsExceptional;
                rep.companion_id = rs.component_id;
                return rep;
            }
        }
        rep.kind = MeetKind::Other;
        return rep;
    }
    rep.kind = MeetKind::Other;
    return rep;
}

Edge clean_arc(const GraphContext& ctx, const Edge& arc_in, double eps) {
    const FatouAtlas& atlas = *ctx.atlas;
    std::vector<SpherePoint> base_julia;
    for (const auto& p : arc_in.polyline)
        if (atlas.grid.near_julia(p, 1.5)) base_julia.push_back(p);

    for (int attempt = 0; attempt < 32; ++attempt) {
        std::mt19937 rng(ctx.cfg.rng_seed * 7919u + static_cast<unsigned>(attempt));
        std::uniform_real_distribution<double> uni(-1.0, 1.0);

        Edge e = arc_in;
        size_t L = e.polyline.size();
        if (L > 4 && attempt > 0) {
            // smooth random normal jitter, vanishing at the endpoints
            double a1 = uni(rng), a2 = uni(rng), a3 = uni(rng);
            double amp = 0.35 * eps;
            for (size_t i = 1; i + 1 < L; ++i) {
                double t = static_cast<double>(i) / (L - 1);
                double bump = std::sin(M_PI * t);
                double h = a1 * std::sin(2 * M_PI * t) + a2 * std::sin(4 * M_PI * t) +
                           a3 * std::sin(6 * M_PI * t);
                bool inv = home_inverted(e.polyline[i]);
                cplx c = chart_coord(e.polyline[i], inv);
                cplx tang = chart_coord(e.polyline[std::min(i + 1, L - 1)], inv) -
                            chart_coord(e.polyline[i - 1], inv);
                cplx nrm = tang * cplx(0, 1);
                double tn = std::abs(nrm);
                if (tn < 1e-14) continue;
                c += nrm / tn * (amp * bump * h) * (1.0 + std::norm(c)) / 2.0;
                e.polyline[i] = from_chart(c, inv);
            }
            e.rays.clear();
        }

        try {
            e = first_last(ctx, e, eps);
        } catch (const LandingFailure&) {
            continue;
        }

        // dusty sweep: push single-point touches off component closures
        bool dirty = false;
        for (int pass = 0; pass < 8; ++pass) {
            dirty = false;
            for (const auto& comp : atlas.components) {
                if (comp.diameter < eps) continue;
                MeetReport m = classify_meeting(ctx, e, comp.id);
                if (m.kind != MeetKind::OnePoint) continue;
                // locate the touch and push it away from the component center
                for (size_t i = 1; i + 1 < e.polyline.size(); ++i) {
                    double px = atlas.grid.pixel_size(e.polyline[i]);
                    auto ids = atlas.components_touching(e.polyline[i], 1.2 * px);
                    if (std::find(ids.begin(), ids.end(), comp.id) == ids.end()) continue;
                    bool in_ray = false;
                    for (const auto& rs : e.rays)
                        if (static_cast<int>(i) >= rs.from_index && static_cast<int>(i) <= rs.to_index)
                            in_ray = true;
                    if (in_ray) continue;
                    bool inv = home_inverted(e.polyline[i]);
                    cplx c = chart_coord(e.polyline[i], inv);
                    cplx cc = chart_coord(comp.center, inv);
                    cplx away = c - cc;
                    if (std::abs(away) < 1e-12) continue;
                    c += away / std::abs(away) * (2.0 * px) * (1.0 + std::norm(c)) / 2.0;
                    e.polyline[i] = from_chart(c, inv);
                    dirty = true;
                }
            }
            if (!dirty) break;
            try {
                e = first_last(ctx, e, eps);
            } catch (const LandingFailure&) {
                dirty = true;
                break;
            }
        }
        if (dirty) continue;

        // accept when the Julia trace stayed within the eps-neighborhood
        bool close = true;
        if (!base_julia.empty()) {
            for (const auto& p : e.polyline) {
                if (!atlas.grid.near_julia(p, 1.5)) continue;
                double d = std::numeric_limits<double>::infinity();
                for (const auto& q : base_julia) d = std::min(d, chordal(p, q));
                if (d > std::max(eps, 4.0 * atlas.grid.pixel_size(p))) close = false;
            }
        }
        if (close) return e;
    }
    throw SweepBudgetExceeded("clean_arc: attempt budget exhausted");
}

CheckReport check_F_disconnected(const GraphContext& ctx, const PlanarGraph& G) {
    CheckReport rep;
    rep.condition = "F-disconnected";
    const FatouAtlas& atlas = *ctx.atlas;
    const BasinGrid& g = atlas.grid;

    for (const auto& comp : atlas.components) {
        const auto& dec = atlas.complement_of(comp.id);
        for (const auto& region : dec.regions) {
            if (!region.has_fatou || region.diameter < atlas.min_diameter) continue;

            // runs of graph samples inside this region
            struct Run {
                int edge;
                size_t a, b;
                bool touch_a, touch_b;
                bool has_center;
            };
            std::vector<Run> runs;
            auto in_region = [&](const SpherePoint& p) {
                PixelRef r = g.locate(p);
                if (!r.valid) return false;
                return dec.region_of[r.chart][static_cast<size_t>(g.flat(r.i, r.j))] ==
                       region.region_id;
            };
            auto touches_boundary = [&](const SpherePoint& p) {
                // near pixels of the component itself
                auto ids = atlas.components_touching(p, 2.0 * g.pixel_size(p));
                return std::find(ids.begin(), ids.end(), comp.id) != ids.end();
            };
            for (const auto& e : G.edges) {
                bool in = false;
                size_t a = 0;
                for (size_t i = 0; i < e.polyline.size(); ++i) {
                    bool m = in_region(e.polyline[i]);
                    if (m && !in) {
                        a = i;
                        in = true;
                    }
                    if ((!m || i + 1 == e.polyline.size()) && in) {
                        size_t b = m ? i : i - 1;
                        Run run{e.id, a, b, touches_boundary(e.polyline[a]),
                                touches_boundary(e.polyline[b]), false};
                        for (const auto& v : G.vertices) {
                            if (v.kind != VertexKind::FatouCenter) continue;
                            for (size_t k = a; k <= b; ++k)
                                if (chordal(v.pos, e.polyline[k]) < 1e-6) run.has_center = true;
                        }
                        // vertex at the run ends (edge endpoints)
                        if (a == 0 &&
                            G.vertices[static_cast<size_t>(e.v0)].kind == VertexKind::FatouCenter)
                            run.has_center = true;
                        if (b + 1 == e.polyline.size() &&
                            G.vertices[static_cast<size_t>(e.v1)].kind == VertexKind::FatouCenter)
                            run.has_center = true;
                        runs.push_back(run);
                        in = false;
                    }
                }
            }
            // cluster runs that share a graph vertex
            int nr = static_cast<int>(runs.size());
            std::vector<int> parent(static_cast<size_t>(nr));
            for (int i = 0; i < nr; ++i) parent[static_cast<size_t>(i)] = i;
            std::function<int(int)> find = [&](int x) {
                while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
                return x;
            };
            for (int i = 0; i < nr; ++i) {
                for (int j = i + 1; j < nr; ++j) {
                    const Edge& ei = G.edges[static_cast<size_t>(runs[static_cast<size_t>(i)].edge)];
                    const Edge& ej = G.edges[static_cast<size_t>(runs[static_cast<size_t>(j)].edge)];
                    bool share = false;
                    for (int vi : {ei.v0, ei.v1})
                        for (int vj : {ej.v0, ej.v1})
                            if (vi == vj) {
                                // both runs must reach that vertex
                                const SpherePoint& vp = G.vertices[static_cast<size_t>(vi)].pos;
                                auto reaches = [&](const Run& r, const Edge& e2) {
                                    return chordal(e2.polyline[r.a], vp) < 1e-6 ||
                                           chordal(e2.polyline[r.b], vp) < 1e-6;
                                };
                                if (reaches(runs[static_cast<size_t>(i)], ei) &&
                                    reaches(runs[static_cast<size_t>(j)], ej))
                                    share = true;
                            }
                    if (share) parent[static_cast<size_t>(find(i))] = find(j);
                }
            }
            std::map<int, std::vector<int>> clusters;
            for (int i = 0; i < nr; ++i) clusters[find(i)].push_back(i);
            for (auto& [root, members] : clusters) {
                bool center = false;
                std::vector<SpherePoint> touches;
                for (int m : members) {
                    const Run& r = runs[static_cast<size_t>(m)];
                    if (r.has_center) center = true;
                    const Edge& e = G.edges[static_cast<size_t>(r.edge)];
                    if (r.touch_a) touches.push_back(e.polyline[r.a]);
                    if (r.touch_b) touches.push_back(e.polyline[r.b]);
                }
                if (center) continue;
                // two well-separated boundary touches without a Fatou center
                bool separated = false;
                for (size_t i = 0; i < touches.size() && !separated; ++i)
                    for (size_t j = i + 1; j < touches.size() && !separated; ++j)
                        if (chordal(touches[i], touches[j]) >
                            4.0 * g.pixel_size(touches[i]))
                            separated = true;
                if (separated)
                    rep.fail(touches[0],
                             "boundary-to-boundary arc in a complement region without a Fatou center");
            }
        }
    }
    return rep;
}

AdmissibilityReport check_admissible(const GraphContext& ctx, const PostcriticalData& pcf,
                                     const PlanarGraph& G, int n_pullback_depth) {
    AdmissibilityReport rep;
    const FatouAtlas& atlas = *ctx.atlas;

    // A1: regulated = obstruction sweep at the marked Julia vertices and the
    // annotated ray junctions, plus the linking condition. Unmarked
    // subdivision vertices are vertexing artifacts of the distinct-endpoint
    // rule and are not sweep points.
    rep.regulated.condition = "A1-regulated";
    for (const auto& v : G.vertices) {
        if (v.kind != VertexKind::JuliaPoint) continue;
        if (std::find(G.marked_P.begin(), G.marked_P.end(), v.id) == G.marked_P.end()) continue;
        for (int eid : G.incident_edges(v.id)) {
            try {
                CheckReport r = check_obstruction(ctx, G.edges[static_cast<size_t>(eid)], v.pos, &G);
                for (auto& w : r.witnesses) rep.regulated.witnesses.push_back(w);
                if (!r.pass) rep.regulated.pass = false;
            } catch (const AccessUnresolved&) {
                // vertex off the Julia raster resolution; nothing to test
            }
        }
    }
    for (const auto& e : G.edges) {
        for (const auto& rs : e.rays) {
            const SpherePoint& lp = rs.outward ? e.polyline[static_cast<size_t>(rs.to_index)]
                                               : e.polyline[static_cast<size_t>(rs.from_index)];
            if (G.find_vertex(lp, 1e-6) >= 0) continue;  // already handled above
            try {
                CheckReport r = check_obstruction(ctx, e, lp, &G);
                for (auto& w : r.witnesses) rep.regulated.witnesses.push_back(w);
                if (!r.pass) rep.regulated.pass = false;
            } catch (const AccessUnresolved&) {
            }
        }
    }
    try {
        CheckReport link = check_linking(ctx, G);
        if (!link.pass) {
            rep.regulated.pass = false;
            for (auto& w : link.witnesses) rep.regulated.witnesses.push_back(w);
        }
    } catch (const AccessUnresolved&) {
    }

    // A2: every vertex iterates into the marked set
    rep.vertices_to_P.condition = "A2-vertices-into-P";
    std::vector<SpherePoint> P;
    for (int id : G.marked_P) P.push_back(G.vertices[static_cast<size_t>(id)].pos);
    for (const auto& v : G.vertices) {
        SpherePoint z = v.pos;
        bool hit = false;
        for (int k = 0; k <= n_pullback_depth && !hit; ++k) {
            for (const auto& p : P)
                if (chordal(z, p) < 1e-6) hit = true;
            if (!hit) z = atlas.map.evaluate(z);
        }
        if (!hit) rep.vertices_to_P.fail(v.pos, "vertex does not iterate into P");
    }

    // A3: periodic Fatou centers are non-cut
    rep.centers_noncut.condition = "A3-periodic-centers-non-cut";
    CutReport cuts = cut_points(G);
    for (const auto& v : G.vertices) {
        if (v.kind != VertexKind::FatouCenter) continue;
        int cid = atlas.component_at(v.pos);
        if (cid < 0 || !atlas.components[static_cast<size_t>(cid)].is_periodic()) continue;
        if (std::find(cuts.cut_vertices.begin(), cuts.cut_vertices.end(), v.id) !=
            cuts.cut_vertices.end())
            rep.centers_noncut.fail(v.pos, "periodic Fatou center is a cut point");
    }

    // A4: rays landing at marked Julia vertices are edges of G
    rep.rays_present.condition = "A4-marked-rays-present";
    for (int id : G.marked_P) {
        const Vertex& v = G.vertices[static_cast<size_t>(id)];
        if (v.kind != VertexKind::JuliaPoint) continue;
        AccessRecord rec;
        try {
            rec = acc_estimate(atlas, *ctx.bott, v.pos, 64, ctx.cfg.land_tol);
        } catch (const std::exception&) {
            continue;
        }
        for (const auto& ray : rec.acc) {
            if (!ray_in_graph(G, ray.component_id, ray.angle, 1e-3))
                rep.rays_present.fail(v.pos, "internal ray landing at a marked point is missing");
        }
    }
    (void)pcf;
    return rep;
}

}  // namespace dynamo
