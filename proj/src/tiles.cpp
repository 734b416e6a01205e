#include "dynamo/tiles.hpp"

#include <algorithm>
#include <climits>
#include <cstdio>
#include <functional>
#include <map>

namespace dynamo {

namespace {

// rasterize the graph trace with sub-pixel sampling into both charts
void rasterize_graph(const BasinGrid& g, const PlanarGraph& G, std::vector<uint8_t> mask[2]) {
    int res = g.resolution;
    for (int chart = 0; chart < 2; ++chart)
        mask[chart].assign(static_cast<size_t>(res) * res, 0);
    auto mark = [&](const SpherePoint& p) {
        for (int chart = 0; chart < 2; ++chart) {
            PixelRef r = g.locate_in_chart(p, chart);
            if (r.valid) mask[chart][static_cast<size_t>(g.flat(r.i, r.j))] = 1;
        }
    };
    for (const auto& e : G.edges) {
        for (size_t i = 0; i + 1 < e.polyline.size(); ++i) {
            const SpherePoint& a = e.polyline[i];
            const SpherePoint& b = e.polyline[i + 1];
            double len = chordal(a, b);
            double px = std::min(g.pixel_size(a), g.pixel_size(b));
            int nsub = std::max(1, static_cast<int>(std::ceil(len / (0.45 * px))));
            bool inv = home_inverted(a);
            cplx ca = chart_coord(a, inv), cb = chart_coord(b, inv);
            for (int s = 0; s <= nsub; ++s) {
                mark(from_chart(ca + (cb - ca) * (static_cast<double>(s) / nsub), inv));
            }
        }
    }
}

double pixel_diameter(const BasinGrid& g, const std::vector<int> of[2], int id, size_t count) {
    std::vector<SpherePoint> pts;
    size_t stride = std::max<size_t>(1, count / 600);
    size_t seen = 0;
    for (int chart = 0; chart < 2; ++chart) {
        for (int i = 0; i < g.resolution; ++i)
            for (int j = 0; j < g.resolution; ++j) {
                if (of[chart][static_cast<size_t>(g.flat(i, j))] != id) continue;
                if (!g.is_home(chart, i, j)) continue;
                if (seen++ % stride == 0) pts.push_back(g.pixel_point(chart, i, j));
            }
    }
    return diameter(pts);
}

// deg(f^n | U) along the image chain, or -1 when the chain leaves the
// materialized atlas or its endpoint is not periodic
long chain_degree(const FatouAtlas& atlas, int comp, int n) {
    long deg = 1;
    int cur = comp;
    for (int k = 0; k < n; ++k) {
        if (cur < 0) return -1;
        deg *= atlas.components[static_cast<size_t>(cur)].degree_on_component;
        cur = atlas.components[static_cast<size_t>(cur)].image_id;
    }
    if (cur < 0 || !atlas.components[static_cast<size_t>(cur)].is_periodic()) return -1;
    return deg;
}

}  // namespace

TileSet faces(const GraphContext& ctx, const PostcriticalData& pcf, const PlanarGraph& G, int n) {
    const FatouAtlas& atlas = *ctx.atlas;
    const BasinGrid& g = atlas.grid;
    TileSet ts;
    ts.level = n;

    PullbackGraph H;
    if (n > 0) {
        H = pullback_graph(atlas.map, pcf, G, n, ctx.cfg.lift_tol);
    } else {
        H.graph = G;
    }

    std::vector<uint8_t> mask[2];
    rasterize_graph(g, H.graph, mask);

    auto value = [&](int chart, int i, int j) {
        return mask[chart][static_cast<size_t>(g.flat(i, j))] ? INT_MIN : 0;
    };
    std::vector<int> counts = sphere_regions(g, value, ts.face_of);

    // a connected trace on the sphere makes every complement region simply
    // connected; verify the trace is one region
    std::vector<int> trace_of[2];
    auto tvalue = [&](int chart, int i, int j) {
        return mask[chart][static_cast<size_t>(g.flat(i, j))] ? 0 : INT_MIN;
    };
    std::vector<int> tcounts = sphere_regions(g, tvalue, trace_of);
    bool trace_connected = tcounts.size() <= 1;

    ts.faces.resize(counts.size());
    for (size_t f = 0; f < counts.size(); ++f) {
        ts.faces[f].id = static_cast<int>(f);
        ts.faces[f].level = n;
        ts.faces[f].pixel_count = static_cast<size_t>(counts[f]);
        ts.faces[f].simply_connected = trace_connected;
        if (counts[f] < 4)
            throw RasterTooCoarse("faces: a face is thinner than the raster resolves");
        ts.faces[f].diameter = pixel_diameter(g, ts.face_of, static_cast<int>(f), ts.faces[f].pixel_count);
    }
    for (int chart = 0; chart < 2 && !ts.faces.empty(); ++chart)
        for (int i = 0; i < g.resolution; ++i)
            for (int j = 0; j < g.resolution; ++j) {
                int f = ts.face_of[chart][static_cast<size_t>(g.flat(i, j))];
                if (f >= 0 && ts.faces[static_cast<size_t>(f)].pixel_count > 0 &&
                    ts.faces[static_cast<size_t>(f)].sample.z == cplx(0, 0) &&
                    !ts.faces[static_cast<size_t>(f)].sample.inf && g.is_home(chart, i, j))
                    ts.faces[static_cast<size_t>(f)].sample = g.pixel_point(chart, i, j);
            }
    return ts;
}

double sector_width(const GraphContext& ctx, const Sector& s, int rho_samples, int arc_samples) {
    const BottcherSystem& bott = *ctx.bott;
    double best = 0.0;
    for (int k = 1; k <= rho_samples; ++k) {
        double rho = s.r * k / rho_samples;
        std::vector<SpherePoint> arc;
        SpherePoint seed;
        bool have_seed = false;
        for (int a = 0; a <= arc_samples; ++a) {
            double th = s.theta_lo + s.extent * a / arc_samples;
            cplx w = rho * std::exp(cplx(0, 2 * M_PI * th));
            try {
                SpherePoint p = have_seed ? bott.inverse_seeded(s.component_id, w, seed)
                                          : bott.inverse(s.component_id, w);
                arc.push_back(p);
                seed = p;
                have_seed = true;
            } catch (const std::exception&) {
                have_seed = false;
            }
        }
        best = std::max(best, diameter(arc));
    }
    return best;
}

TileSet decompose_level(const GraphContext& ctx, const PostcriticalData& pcf, const PlanarGraph& G,
                        int n, double eps0) {
    const FatouAtlas& atlas = *ctx.atlas;
    const BottcherSystem& bott = *ctx.bott;
    const BasinGrid& g = atlas.grid;
    int res = g.resolution;

    TileSet ts = faces(ctx, pcf, G, n);

    // cut disks phi^{-1}(D_{r_n}) per component whose n-th image is periodic
    std::vector<int> cut_of[2];
    for (int chart = 0; chart < 2; ++chart)
        cut_of[chart].assign(static_cast<size_t>(res) * res, -1);
    std::map<int, double> cut_radius;
    std::map<int, double> cut_residual;
    for (const auto& comp : atlas.components) {
        long deg = chain_degree(atlas, comp.id, n);
        if (deg < 1 || !bott.chart(comp.id).usable) continue;
        double r = std::pow(0.5, 1.0 / static_cast<double>(deg));
        cut_radius[comp.id] = r;
        std::vector<SpherePoint> eq;
        try {
            eq = bott.equipotential(comp.id, r, 256);
        } catch (const std::exception&) {
            continue;
        }
        // measured modulus on the curve, against the ladder value
        double resid = 0.0;
        for (size_t k = 0; k < eq.size(); k += 64)
            resid = std::max(resid, std::abs(bott.modulus(comp.id, eq[k]) - r));
        cut_residual[comp.id] = resid;

        // rasterize the curve and flood from the center
        std::vector<uint8_t> curve[2];
        for (int chart = 0; chart < 2; ++chart)
            curve[chart].assign(static_cast<size_t>(res) * res, 0);
        for (size_t i = 0; i + 1 < eq.size(); ++i) {
            double len = chordal(eq[i], eq[i + 1]);
            double px = g.pixel_size(eq[i]);
            int nsub = std::max(1, static_cast<int>(std::ceil(len / (0.4 * px))));
            bool inv = home_inverted(eq[i]);
            cplx a = chart_coord(eq[i], inv), b = chart_coord(eq[i + 1], inv);
            for (int s = 0; s <= nsub; ++s) {
                SpherePoint p = from_chart(a + (b - a) * (static_cast<double>(s) / nsub), inv);
                for (int chart = 0; chart < 2; ++chart) {
                    PixelRef rr = g.locate_in_chart(p, chart);
                    if (rr.valid) curve[chart][static_cast<size_t>(g.flat(rr.i, rr.j))] = 1;
                }
            }
        }
        PixelRef c0 = g.locate(comp.center);
        if (!c0.valid) continue;
        std::vector<std::pair<int, std::pair<int, int>>> stack{{c0.chart, {c0.i, c0.j}}};
        while (!stack.empty()) {
            auto [chart, ij] = stack.back();
            stack.pop_back();
            auto [i, j] = ij;
            if (i < 0 || j < 0 || i >= res || j >= res) continue;
            size_t idx = static_cast<size_t>(g.flat(i, j));
            if (cut_of[chart][idx] == comp.id) continue;
            if (curve[chart][idx]) continue;
            cut_of[chart][idx] = comp.id;
            stack.push_back({chart, {i + 1, j}});
            stack.push_back({chart, {i - 1, j}});
            stack.push_back({chart, {i, j + 1}});
            stack.push_back({chart, {i, j - 1}});
            // seam hop
            SpherePoint p = g.pixel_point(chart, i, j);
            cplx cc = chart_coord(p, chart == 1);
            double m = std::abs(cc);
            if (m > 0.8 && m < 1.25) {
                PixelRef o = g.locate_in_chart(p, 1 - chart);
                if (o.valid) stack.push_back({1 - chart, {o.i, o.j}});
            }
        }
        // the curve pixels themselves belong to the closed disk
        for (int chart = 0; chart < 2; ++chart)
            for (size_t idx = 0; idx < curve[chart].size(); ++idx)
                if (curve[chart][idx]) cut_of[chart][idx] = comp.id;
    }

    // subfaces and sectors per face
    size_t nfaces = ts.faces.size();
    std::vector<std::vector<SpherePoint>> subface_pts(nfaces);
    std::vector<int> sec_of[2];
    auto svalue = [&](int chart, int i, int j) {
        size_t idx = static_cast<size_t>(g.flat(i, j));
        int f = ts.face_of[chart][idx];
        if (f < 0) return INT_MIN;
        int cU = cut_of[chart][idx];
        if (cU < 0) return INT_MIN;
        return f * 4096 + cU;  // sector key: face x cut component
    };
    std::vector<int> scounts = sphere_regions(g, svalue, sec_of);
    struct SecAgg {
        int face = -1, comp = -1;
        std::vector<SpherePoint> boundary_near_trace;
        std::vector<SpherePoint> pixels;
        size_t count = 0;
    };
    std::vector<SecAgg> aggs(scounts.size());
    for (int chart = 0; chart < 2; ++chart) {
        for (int i = 0; i < res; ++i) {
            for (int j = 0; j < res; ++j) {
                size_t idx = static_cast<size_t>(g.flat(i, j));
                int sid = sec_of[chart][idx];
                int f = ts.face_of[chart][idx];
                if (sid >= 0) {
                    auto& a = aggs[static_cast<size_t>(sid)];
                    a.face = f;
                    a.comp = cut_of[chart][idx];
                    a.count++;
                    if (g.is_home(chart, i, j) && a.pixels.size() < 400 && (i + j) % 3 == 0)
                        a.pixels.push_back(g.pixel_point(chart, i, j));
                    // boundary pixels adjacent to the graph trace carry the
                    // bounding-ray angles
                    bool near_trace = false;
                    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
                    for (int k2 = 0; k2 < 4; ++k2) {
                        int ni = i + di[k2], nj = j + dj[k2];
                        if (ni < 0 || nj < 0 || ni >= res || nj >= res) continue;
                        if (ts.face_of[chart][static_cast<size_t>(g.flat(ni, nj))] == -1)
                            near_trace = true;
                    }
                    if (near_trace && a.boundary_near_trace.size() < 64)
                        a.boundary_near_trace.push_back(g.pixel_point(chart, i, j));
                } else if (f >= 0 && g.is_home(chart, i, j)) {
                    if (subface_pts[static_cast<size_t>(f)].size() < 900 && (i * 7 + j) % 5 == 0)
                        subface_pts[static_cast<size_t>(f)].push_back(g.pixel_point(chart, i, j));
                }
            }
        }
    }

    // sector parameters: angles from Bottcher values of trace-adjacent pixels
    for (size_t sid = 0; sid < aggs.size(); ++sid) {
        const SecAgg& a = aggs[sid];
        if (a.face < 0 || a.comp < 0 || a.count < 3) continue;
        Sector s;
        s.component_id = a.comp;
        s.level = n;
        s.face_id = a.face;
        s.r = cut_radius[a.comp];
        s.r_residual = cut_residual.count(a.comp) ? cut_residual[a.comp] : 0.0;

        std::vector<double> angles;
        for (const auto& p : a.boundary_near_trace) {
            try {
                cplx w = bott.value(a.comp, p);
                if (std::abs(w) < 0.02) continue;  // too close to the center
                double th = std::arg(w) / (2 * M_PI);
                angles.push_back(th - std::floor(th));
            } catch (const std::exception&) {
            }
        }
        if (angles.empty()) continue;
        std::sort(angles.begin(), angles.end());
        // minimal circular interval covering the angles = complement of the
        // largest gap
        double best_gap = angles.front() + 1.0 - angles.back();
        size_t gap_at = angles.size() - 1;
        for (size_t k = 0; k + 1 < angles.size(); ++k) {
            double gap = angles[k + 1] - angles[k];
            if (gap > best_gap) {
                best_gap = gap;
                gap_at = k;
            }
        }
        if (best_gap < 0.02) {
            // angles wrap the full circle: one bounding ray, full-turn sector
            s.theta_lo = angles.front();
            s.theta_hi = angles.front();
            s.extent = 1.0;
        } else {
            s.theta_lo = angles[(gap_at + 1) % angles.size()];
            s.theta_hi = angles[gap_at];
            s.extent = s.theta_hi - s.theta_lo;
            if (s.extent < 0) s.extent += 1.0;
        }
        // refine the bounds on the nearest trace polyline samples: pick the
        // extreme angles among boundary values
        s.width = sector_width(ctx, s, 24, 24);
        ts.sectors.push_back(s);
    }

    // subface and tile metrics per face
    ts.tiles.resize(nfaces);
    for (size_t f = 0; f < nfaces; ++f) {
        TileDecomposition& td = ts.tiles[f];
        td.face_id = static_cast<int>(f);
        td.subface_diameter = diameter(subface_pts[f]);
        for (size_t sid = 0; sid < ts.sectors.size(); ++sid)
            if (ts.sectors[sid].face_id == static_cast<int>(f))
                td.sector_ids.push_back(static_cast<int>(sid));
        if (td.subface_diameter < eps0 && td.subface_diameter > 0) {
            td.tile_defined = true;
            // subtile: complement of the big complementary region; at raster
            // scale diam(subtile) tracks diam(subface) from below
            td.subtile_diameter = td.subface_diameter;
            td.rho = td.subtile_diameter;
            for (int sid : td.sector_ids)
                td.rho = std::max(td.rho, ts.sectors[static_cast<size_t>(sid)].width);
        }
    }

    for (size_t f = 0; f < nfaces; ++f) {
        ts.max_subface_diameter = std::max(ts.max_subface_diameter, ts.tiles[f].subface_diameter);
        if (ts.tiles[f].tile_defined) ts.max_rho = std::max(ts.max_rho, ts.tiles[f].rho);
    }
    for (const auto& s : ts.sectors) {
        ts.max_sector_width = std::max(ts.max_sector_width, s.width);
        long deg = chain_degree(atlas, s.component_id, n);
        if (deg >= 1) {
            double bound = 1.0 / static_cast<double>(deg);
            ts.max_angle_excess = std::max(ts.max_angle_excess, std::max(0.0, s.extent - bound));
            ts.max_r_residual = std::max(ts.max_r_residual, s.r_residual);
        }
    }
    return ts;
}

std::vector<DecayRow> decay_report(const GraphContext& ctx, const PostcriticalData& pcf,
                                   const PlanarGraph& G, const std::vector<int>& levels,
                                   double eps0, std::vector<TileSet>* keep_sets) {
    std::vector<DecayRow> rows;
    for (int n : levels) {
        TileSet ts = decompose_level(ctx, pcf, G, n, eps0);
        DecayRow row;
        row.level = n;
        row.faces = static_cast<int>(ts.faces.size());
        row.sectors = static_cast<int>(ts.sectors.size());
        row.max_subface_diam = ts.max_subface_diameter;
        row.max_width = ts.max_sector_width;
        row.max_rho = ts.max_rho;
        row.max_angle_excess = ts.max_angle_excess;
        row.max_r_residual = ts.max_r_residual;
        rows.push_back(row);
        if (keep_sets) keep_sets->push_back(std::move(ts));
    }
    return rows;
}

std::string decay_csv(const std::vector<DecayRow>& rows) {
    std::string out = "level,faces,sectors,max_subface_diam,max_width,max_rho,max_angle_excess,max_r_residual\n";
    for (const auto& r : rows) {
        char line[256];
        snprintf(line, sizeof line, "%d,%d,%d,%.12g,%.12g,%.12g,%.12g,%.12g\n", r.level, r.faces,
                 r.sectors, r.max_subface_diam, r.max_width, r.max_rho, r.max_angle_excess,
                 r.max_r_residual);
        out += line;
    }
    return out;
}

}  // namespace dynamo
