#include "dynamo/grid.hpp"

#include <omp.h>
#include <random>

#include <algorithm>
#include <cmath>

namespace dynamo {

SpherePoint BasinGrid::pixel_point(int chart, int i, int j) const {
    double s = step();
    cplx c(-extent + (j + 0.5) * s, -extent + (i + 0.5) * s);
    return chart == 0 ? SpherePoint(c) : from_chart(c, true);
}

PixelRef BasinGrid::locate_in_chart(const SpherePoint& p, int chart) const {
    PixelRef r;
    r.chart = chart;
    if (p.inf && chart == 0) return r;
    if (!p.inf && chart == 1 && std::abs(p.z) < 1.0 / kInfThreshold) return r;
    cplx c = chart_coord(p, chart == 1);
    double s = step();
    int j = static_cast<int>(std::floor((c.real() + extent) / s));
    int i = static_cast<int>(std::floor((c.imag() + extent) / s));
    if (i < 0 || j < 0 || i >= resolution || j >= resolution) return r;
    r.i = i;
    r.j = j;
    r.valid = true;
    return r;
}

PixelRef BasinGrid::locate(const SpherePoint& p) const {
    int chart = 0;
    if (!p.inf && std::abs(p.z) <= 1.0) {
        chart = 0;
    } else {
        chart = 1;
    }
    return locate_in_chart(p, chart);
}

int BasinGrid::label_at(const SpherePoint& p) const {
    PixelRef r = locate(p);
    if (!r.valid) return JULIA;
    return labels[r.chart][flat(r.i, r.j)];
}

double BasinGrid::pixel_size(const SpherePoint& p) const {
    bool inv = p.inf || std::abs(p.z) > 1.0;
    cplx c = chart_coord(p, inv);
    return step() * 2.0 / (1.0 + std::norm(c));
}

bool BasinGrid::is_home(int chart, int i, int j) const {
    double s = step();
    cplx c(-extent + (j + 0.5) * s, -extent + (i + 0.5) * s);
    double m = std::abs(c);
    if (chart == 0) return m <= 1.0;
    return m < 1.0;
}

bool BasinGrid::near_julia(const SpherePoint& p, double pixels) const {
    PixelRef r = locate(p);
    if (!r.valid) return false;
    int rad = static_cast<int>(std::ceil(pixels));
    for (int di = -rad; di <= rad; ++di) {
        for (int dj = -rad; dj <= rad; ++dj) {
            int i = r.i + di, j = r.j + dj;
            if (i < 0 || j < 0 || i >= resolution || j >= resolution) continue;
            if (julia_at(r.chart, i, j)) return true;
        }
    }
    return false;
}

void BasinGrid::mark_julia(const SpherePoint& p) {
    for (int chart = 0; chart < 2; ++chart) {
        PixelRef r = locate_in_chart(p, chart);
        if (r.valid) julia_mask[chart][static_cast<size_t>(flat(r.i, r.j))] = 1;
    }
}

namespace {

// Trap radius per cycle point: a chordal disk D(c_i, r) whose q-th image lands
// in D(c_i, r/2), verified on boundary samples. Entering a trap certifies
// convergence to that cycle.
std::vector<std::vector<double>> compute_traps(const RationalMap& map,
                                               const std::vector<std::vector<SpherePoint>>& cycles) {
    double sep = 1.0;
    std::vector<SpherePoint> all;
    for (auto& cyc : cycles)
        for (auto& p : cyc) all.push_back(p);
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = i + 1; j < all.size(); ++j) sep = std::min(sep, chordal(all[i], all[j]));

    std::vector<std::vector<double>> radii;
    for (auto& cyc : cycles) {
        int q = static_cast<int>(cyc.size());
        std::vector<double> rs;
        for (int k = 0; k < q; ++k) {
            const SpherePoint& c = cyc[static_cast<size_t>(k)];
            double r = std::min(0.2, sep / 4.0);
            bool cin = home_inverted(c);
            cplx c0 = chart_coord(c, cin);
            for (; r > 1e-7; r *= 0.5) {
                double rho = r * (1.0 + std::norm(c0)) / 2.0;
                bool ok = true;
                for (int s = 0; s < 48 && ok; ++s) {
                    cplx t = c0 + rho * std::exp(cplx(0, 2 * M_PI * s / 48.0));
                    SpherePoint z = from_chart(t, cin);
                    if (chordal(z, c) > 1.2 * r) {
                        ok = false;
                        continue;
                    }
                    SpherePoint im = map.iterate(z, q);
                    if (chordal(im, c) > r / 2.0) ok = false;
                }
                if (ok) break;
            }
            rs.push_back(r);
        }
        radii.push_back(rs);
    }
    return radii;
}

int classify_point(const RationalMap& map, SpherePoint z, int max_iter,
                   const std::vector<std::vector<SpherePoint>>& cycles,
                   const std::vector<std::vector<double>>& radii) {
    for (int it = 0; it < max_iter; ++it) {
        for (size_t c = 0; c < cycles.size(); ++c) {
            for (size_t k = 0; k < cycles[c].size(); ++k) {
                if (chordal(z, cycles[c][k]) < radii[c][k]) return static_cast<int>(c);
            }
        }
        z = map.evaluate(z);
    }
    return JULIA;
}

int classify_point(const RationalMap& map, SpherePoint z, int max_iter,
                   const std::vector<std::vector<SpherePoint>>& cycles,
                   const std::vector<std::vector<double>>& radii);

// Rasterize the Julia set: label-change boundaries plus a seeded inverse
// iteration from a repelling fixed point, plus the Julia-type postcritical
// points. Deterministic and single-threaded.
void rasterize_julia(BasinGrid& g, const RationalMap& map, const PostcriticalData& pcf) {
    int res = g.resolution;
    for (int chart = 0; chart < 2; ++chart) {
        for (int i = 0; i < res; ++i) {
            for (int j = 0; j < res; ++j) {
                int v = g.labels[chart][static_cast<size_t>(g.flat(i, j))];
                bool boundary = v == JULIA;
                if (!boundary && j + 1 < res &&
                    g.labels[chart][static_cast<size_t>(g.flat(i, j + 1))] != v)
                    boundary = true;
                if (!boundary && i + 1 < res &&
                    g.labels[chart][static_cast<size_t>(g.flat(i + 1, j))] != v)
                    boundary = true;
                if (boundary) g.julia_mask[chart][static_cast<size_t>(g.flat(i, j))] = 1;
            }
        }
    }

    SpherePoint z;
    bool found = false;
    for (auto& [p, m] : fixed_points(map)) {
        if (map.spherical_derivative(p) > 1.05) {
            z = p;
            found = true;
            break;
        }
    }
    if (!found) return;
    g.mark_julia(z);

    // Julia-type postcritical points: those that never enter a trap disk.
    for (auto& p : pcf.postcritical_set)
        if (classify_point(map, p, g.max_iter, g.cycles, g.trap_radii) == JULIA) g.mark_julia(p);

    std::mt19937 rng(0x9e3779b9u);
    size_t npoints = std::min<size_t>(400000, static_cast<size_t>(res) * 160);
    for (size_t n = 0; n < npoints + 64; ++n) {
        std::vector<SpherePoint> pres;
        try {
            for (auto& [p, m] : map.preimages(z))
                for (int k = 0; k < m; ++k) pres.push_back(p);
        } catch (const RootFindingFailed&) {
            break;
        }
        if (pres.empty()) break;
        z = pres[rng() % pres.size()];
        if (n >= 64) g.mark_julia(z);
    }
}

BasinGrid label_impl(const RationalMap& map, const PostcriticalData& pcf, int resolution,
                     int max_iter, bool parallel) {
    if (resolution < 16 || resolution > 8192)
        throw std::invalid_argument("label_basins: resolution out of range");
    BasinGrid g;
    g.resolution = resolution;
    g.max_iter = max_iter;
    g.cycles = pcf.superattracting_cycles();
    if (g.cycles.empty()) throw NotPCF("label_basins: no superattracting cycle");
    g.trap_radii = compute_traps(map, g.cycles);
    for (int chart = 0; chart < 2; ++chart) {
        g.labels[chart].assign(static_cast<size_t>(resolution) * resolution, JULIA);
        g.julia_mask[chart].assign(static_cast<size_t>(resolution) * resolution, 0);
        auto* out = g.labels[chart].data();
#pragma omp parallel for schedule(static) if (parallel)
        for (int i = 0; i < resolution; ++i) {
            for (int j = 0; j < resolution; ++j) {
                SpherePoint z = g.pixel_point(chart, i, j);
                out[g.flat(i, j)] = classify_point(map, z, max_iter, g.cycles, g.trap_radii);
            }
        }
    }
    rasterize_julia(g, map, pcf);
    return g;
}

}  // namespace

std::vector<std::pair<SpherePoint, int>> fixed_points(const RationalMap& map) {
    int d = map.deg();
    Poly p(static_cast<size_t>(d) + 2, cplx(0, 0));
    for (int k = 0; k <= d; ++k) p[static_cast<size_t>(k)] += map.num()[static_cast<size_t>(k)];
    for (int k = 0; k <= d; ++k) p[static_cast<size_t>(k + 1)] -= map.den()[static_cast<size_t>(k)];
    Poly pt = trim(p, 1e-13);
    int dp = degree(pt);
    int mult_inf = d + 1 - dp;
    std::vector<cplx> roots;
    if (dp > 0) roots = poly_roots(pt);
    auto clusters = clustered_roots(roots, 1e-8);
    std::vector<std::pair<SpherePoint, int>> out;
    for (auto& [pr, m] : clusters) {
        SpherePoint q = pr;
        if (!q.is_inf() && m == 1) {
            // polish: Newton on f(z) - z in the plane
            cplx x = q.z;
            for (int it = 0; it < 20; ++it) {
                cplx in = x, outv, dv;
                bool oinv;
                map.apply_chart(in, false, outv, oinv, dv);
                if (oinv) break;
                cplx r = outv - x, dr = dv - 1.0;
                if (std::abs(dr) < 1e-300) break;
                x -= r / dr;
            }
            q = SpherePoint(x);
        }
        out.emplace_back(q, m);
    }
    if (mult_inf > 0) out.emplace_back(SpherePoint::infinity(), mult_inf);
    return out;
}

BasinGrid label_basins(const RationalMap& map, const PostcriticalData& pcf, int resolution,
                       int max_iter, bool parallel) {
    return label_impl(map, pcf, resolution, max_iter, parallel);
}

BasinGrid label_basins_serial(const RationalMap& map, const PostcriticalData& pcf, int resolution,
                              int max_iter) {
    return label_impl(map, pcf, resolution, max_iter, false);
}

}  // namespace dynamo
