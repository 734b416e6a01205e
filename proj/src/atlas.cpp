#include "dynamo/atlas.hpp"
#include <functional>
#include <cstdio>
#include <climits>

#include <algorithm>
#include <numeric>
#include <random>

namespace dynamo {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<size_t>(b)] = a;
    }
};

}  // namespace

// Connected classes of same-value pixels across both charts. `value` returns
// an equivalence key per pixel (or INT_MIN to skip). 4-adjacency within a
// chart; the |coord| = 1 seam stitches the charts.
std::vector<int> sphere_regions(const BasinGrid& g,
                                const std::function<int(int, int, int)>& value,
                                std::vector<int> out[2]) {
    int res = g.resolution;
    size_t n = static_cast<size_t>(res) * res;
    UnionFind uf(2 * n);
    auto idx = [&](int chart, int i, int j) { return chart * static_cast<int>(n) + g.flat(i, j); };

    for (int chart = 0; chart < 2; ++chart) {
        for (int i = 0; i < res; ++i) {
            for (int j = 0; j < res; ++j) {
                int v = value(chart, i, j);
                if (v == INT_MIN) continue;
                if (j + 1 < res && value(chart, i, j + 1) == v)
                    uf.unite(idx(chart, i, j), idx(chart, i, j + 1));
                if (i + 1 < res && value(chart, i + 1, j) == v)
                    uf.unite(idx(chart, i, j), idx(chart, i + 1, j));
            }
        }
    }
    // Seam stitching: pixels in the annulus 0.8 <= |c| <= 1.25 of each chart
    // are identified with the pixel of the same sphere point in the other chart.
    for (int chart = 0; chart < 2; ++chart) {
        for (int i = 0; i < res; ++i) {
            for (int j = 0; j < res; ++j) {
                int v = value(chart, i, j);
                if (v == INT_MIN) continue;
                SpherePoint p = g.pixel_point(chart, i, j);
                cplx c = chart_coord(p, chart == 1);
                double m = std::abs(c);
                if (m < 0.8 || m > 1.25) continue;
                PixelRef o = g.locate_in_chart(p, 1 - chart);
                if (!o.valid) continue;
                if (value(1 - chart, o.i, o.j) == v)
                    uf.unite(idx(chart, i, j), idx(1 - chart, o.i, o.j));
            }
        }
    }
    // Compact ids in deterministic scan order.
    std::vector<int> ids(2 * n, -1);
    int next = 0;
    for (int chart = 0; chart < 2; ++chart) {
        out[chart].assign(n, -1);
        for (int i = 0; i < res; ++i) {
            for (int j = 0; j < res; ++j) {
                if (value(chart, i, j) == INT_MIN) continue;
                int root = uf.find(idx(chart, i, j));
                if (ids[static_cast<size_t>(root)] < 0) ids[static_cast<size_t>(root)] = next++;
                out[chart][static_cast<size_t>(g.flat(i, j))] = ids[static_cast<size_t>(root)];
            }
        }
    }
    std::vector<int> count(static_cast<size_t>(next), 0);
    for (int chart = 0; chart < 2; ++chart)
        for (int v : out[chart])
            if (v >= 0) count[static_cast<size_t>(v)]++;
    return count;
}

namespace {

// Subsampled spherical diameter of a pixel class (home pixels only).
double class_diameter(const BasinGrid& g, const std::vector<int> cls[2], int id) {
    std::vector<SpherePoint> pts;
    size_t stride = 1;
    size_t total = 0;
    for (int chart = 0; chart < 2; ++chart)
        for (size_t k = 0; k < cls[chart].size(); ++k)
            if (cls[chart][k] == id) total++;
    stride = std::max<size_t>(1, total / 700);
    size_t seen = 0;
    int res = g.resolution;
    for (int chart = 0; chart < 2; ++chart) {
        for (int i = 0; i < res; ++i) {
            for (int j = 0; j < res; ++j) {
                if (cls[chart][static_cast<size_t>(g.flat(i, j))] != id) continue;
                if (!g.is_home(chart, i, j)) continue;
                if (seen++ % stride == 0) pts.push_back(g.pixel_point(chart, i, j));
            }
        }
    }
    return diameter(pts);
}

}  // namespace

int FatouAtlas::component_at(const SpherePoint& p) const {
    PixelRef r = grid.locate(p);
    if (!r.valid) return -1;
    return comp_of[r.chart][static_cast<size_t>(grid.flat(r.i, r.j))];
}

int FatouAtlas::component_near(const SpherePoint& p, int radius_px) const {
    int c = component_at(p);
    if (c >= 0) return c;
    PixelRef r = grid.locate(p);
    if (!r.valid) return -1;
    for (int rad = 1; rad <= radius_px; ++rad) {
        for (int di = -rad; di <= rad; ++di) {
            for (int dj = -rad; dj <= rad; ++dj) {
                int i = r.i + di, j = r.j + dj;
                if (i < 0 || j < 0 || i >= grid.resolution || j >= grid.resolution) continue;
                int v = comp_of[r.chart][static_cast<size_t>(grid.flat(i, j))];
                if (v >= 0) return v;
            }
        }
    }
    return -1;
}

std::vector<int> FatouAtlas::components_touching(const SpherePoint& p, double radius) const {
    std::vector<int> out;
    for (int chart = 0; chart < 2; ++chart) {
        PixelRef r = grid.locate_in_chart(p, chart);
        if (!r.valid) continue;
        int rad = static_cast<int>(std::ceil(radius / grid.pixel_size(p))) + 1;
        for (int di = -rad; di <= rad; ++di) {
            for (int dj = -rad; dj <= rad; ++dj) {
                int i = r.i + di, j = r.j + dj;
                if (i < 0 || j < 0 || i >= grid.resolution || j >= grid.resolution) continue;
                if (chordal(grid.pixel_point(chart, i, j), p) > radius) continue;
                int v = comp_of[chart][static_cast<size_t>(grid.flat(i, j))];
                if (v >= 0 && std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

double FatouAtlas::depth_inside(const SpherePoint& p, int id, double cap) const {
    PixelRef r = grid.locate(p);
    if (!r.valid) return 0.0;
    double px = grid.pixel_size(p);
    int rad = static_cast<int>(std::ceil(cap / px)) + 1;
    double best = cap;
    for (int di = -rad; di <= rad; ++di) {
        for (int dj = -rad; dj <= rad; ++dj) {
            int i = r.i + di, j = r.j + dj;
            double d;
            if (i < 0 || j < 0 || i >= grid.resolution || j >= grid.resolution) {
                d = 0.0;  // outside the chart square: unknown, treat as boundary
                SpherePoint q = grid.pixel_point(r.chart, std::clamp(i, 0, grid.resolution - 1),
                                                 std::clamp(j, 0, grid.resolution - 1));
                d = chordal(q, p);
            } else if (comp_of[r.chart][static_cast<size_t>(grid.flat(i, j))] != id) {
                d = chordal(grid.pixel_point(r.chart, i, j), p);
            } else {
                continue;
            }
            best = std::min(best, d);
        }
    }
    return best;
}

const ComplementDecomposition& FatouAtlas::complement_of(int component_id) const {
    auto it = complement_cache_.find(component_id);
    if (it != complement_cache_.end()) return it->second;

    ComplementDecomposition dec;
    auto value = [&](int chart, int i, int j) {
        int v = comp_of[chart][static_cast<size_t>(grid.flat(i, j))];
        return v == component_id ? INT_MIN : 0;
    };
    std::vector<int> counts = sphere_regions(grid, value, dec.region_of);
    size_t nreg = counts.size();
    dec.regions.resize(nreg);
    std::vector<std::vector<SpherePoint>> samples(nreg);
    for (int chart = 0; chart < 2; ++chart) {
        for (int i = 0; i < grid.resolution; ++i) {
            for (int j = 0; j < grid.resolution; ++j) {
                int rg = dec.region_of[chart][static_cast<size_t>(grid.flat(i, j))];
                if (rg < 0) continue;
                auto& reg = dec.regions[static_cast<size_t>(rg)];
                reg.region_id = rg;
                int v = comp_of[chart][static_cast<size_t>(grid.flat(i, j))];
                if (v >= 0 && v != component_id) {
                    reg.has_fatou = true;
                    if (std::find(reg.touching_components.begin(), reg.touching_components.end(),
                                  v) == reg.touching_components.end())
                        reg.touching_components.push_back(v);
                }
                if (grid.is_home(chart, i, j) &&
                    samples[static_cast<size_t>(rg)].size() < 900 &&
                    ((i * 131 + j * 17) % 23 == 0))
                    samples[static_cast<size_t>(rg)].push_back(grid.pixel_point(chart, i, j));
            }
        }
    }
    for (size_t k = 0; k < nreg; ++k) dec.regions[k].diameter = diameter(samples[k]);
    auto [pos, inserted] = complement_cache_.emplace(component_id, std::move(dec));
    return pos->second;
}

std::vector<SpherePoint> FatouAtlas::julia_sample(size_t max_points, unsigned seed) const {
    std::vector<SpherePoint> all;
    for (int chart = 0; chart < 2; ++chart) {
        for (int i = 0; i < grid.resolution; ++i) {
            for (int j = 0; j < grid.resolution; ++j) {
                if (grid.labels[chart][static_cast<size_t>(grid.flat(i, j))] != JULIA) continue;
                if (!grid.is_home(chart, i, j)) continue;
                all.push_back(grid.pixel_point(chart, i, j));
            }
        }
    }
    std::mt19937 rng(seed);
    std::shuffle(all.begin(), all.end(), rng);
    if (all.size() > max_points) all.resize(max_points);
    return all;
}

FatouAtlas component_atlas(const RationalMap& map, const PostcriticalData& pcf, BasinGrid grid,
                           double min_diameter) {
    FatouAtlas atlas(map, pcf);
    atlas.grid = std::move(grid);
    atlas.min_diameter = min_diameter;
    const BasinGrid& g = atlas.grid;
    int res = g.resolution;

    std::vector<int> cls[2];
    auto value = [&](int chart, int i, int j) {
        int v = g.labels[chart][static_cast<size_t>(g.flat(i, j))];
        return v == JULIA ? INT_MIN : v;
    };
    std::vector<int> counts = sphere_regions(g, value, cls);

    // Materialize classes by diameter, in deterministic class-id order.
    std::vector<int> class_to_comp(counts.size(), -1);
    int next_id = 0;
    std::vector<double> diams;
    for (size_t c = 0; c < counts.size(); ++c) {
        double d = class_diameter(g, cls, static_cast<int>(c));
        if (d >= min_diameter) {
            class_to_comp[c] = next_id++;
            diams.push_back(d);
        }
    }
    for (int chart = 0; chart < 2; ++chart) {
        atlas.comp_of[chart].assign(static_cast<size_t>(res) * res, -1);
        for (size_t k = 0; k < cls[chart].size(); ++k) {
            int c = cls[chart][k];
            if (c >= 0 && class_to_comp[static_cast<size_t>(c)] >= 0)
                atlas.comp_of[chart][k] = class_to_comp[static_cast<size_t>(c)];
        }
    }

    atlas.components.resize(static_cast<size_t>(next_id));
    for (int id = 0; id < next_id; ++id) {
        auto& comp = atlas.components[static_cast<size_t>(id)];
        comp.id = id;
        comp.diameter = diams[static_cast<size_t>(id)];
    }

    // Deep seed pixel per component: multi-source BFS from non-component
    // pixels gives a distance-to-boundary; take the max per component.
    {
        std::vector<int> dist[2];
        std::vector<std::pair<int, std::pair<int, int>>> frontier;
        for (int chart = 0; chart < 2; ++chart) {
            dist[chart].assign(static_cast<size_t>(res) * res, -1);
            for (int i = 0; i < res; ++i) {
                for (int j = 0; j < res; ++j) {
                    int v = atlas.comp_of[chart][static_cast<size_t>(g.flat(i, j))];
                    bool frontier_px = v < 0;
                    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
                    for (int k = 0; k < 4 && !frontier_px; ++k) {
                        int ni = i + di[k], nj = j + dj[k];
                        if (ni < 0 || nj < 0 || ni >= res || nj >= res) continue;
                        if (atlas.comp_of[chart][static_cast<size_t>(g.flat(ni, nj))] != v)
                            frontier_px = true;
                    }
                    if (frontier_px) {
                        dist[chart][static_cast<size_t>(g.flat(i, j))] = 0;
                        frontier.push_back({chart, {i, j}});
                    }
                }
            }
        }
        size_t head = 0;
        while (head < frontier.size()) {
            auto [chart, ij] = frontier[head++];
            auto [i, j] = ij;
            int d0 = dist[chart][static_cast<size_t>(g.flat(i, j))];
            const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                int ni = i + di[k], nj = j + dj[k];
                if (ni < 0 || nj < 0 || ni >= res || nj >= res) continue;
                if (dist[chart][static_cast<size_t>(g.flat(ni, nj))] >= 0) continue;
                dist[chart][static_cast<size_t>(g.flat(ni, nj))] = d0 + 1;
                frontier.push_back({chart, {ni, nj}});
            }
        }
        std::vector<int> best(static_cast<size_t>(next_id), -1);
        std::vector<SpherePoint> seed(static_cast<size_t>(next_id));
        for (int chart = 0; chart < 2; ++chart) {
            for (int i = 0; i < res; ++i) {
                for (int j = 0; j < res; ++j) {
                    int id = atlas.comp_of[chart][static_cast<size_t>(g.flat(i, j))];
                    if (id < 0 || !g.is_home(chart, i, j)) continue;
                    int d = dist[chart][static_cast<size_t>(g.flat(i, j))];
                    if (d > best[static_cast<size_t>(id)]) {
                        best[static_cast<size_t>(id)] = d;
                        seed[static_cast<size_t>(id)] = g.pixel_point(chart, i, j);
                    }
                }
            }
        }
        // Temporarily stash seeds in center; the dynamics pass replaces them.
        for (int id = 0; id < next_id; ++id)
            atlas.components[static_cast<size_t>(id)].center = seed[static_cast<size_t>(id)];
    }

    // cycle_label per component: label of its seed pixel.
    for (auto& comp : atlas.components) comp.cycle_label = g.label_at(comp.center);

    // Image component: where the seed maps. Probe a short forward orbit of the
    // seed in case f(seed) lands on an unlabeled sliver.
    std::vector<SpherePoint> seeds;
    for (auto& comp : atlas.components) {
        seeds.push_back(comp.center);
        // vote over the seed and a few nearby interior pixels
        std::map<int, int> votes;
        PixelRef sr = g.locate(comp.center);
        for (int di = -2; di <= 2; di += 1) {
            for (int dj = -2; dj <= 2; dj += 1) {
                if (std::abs(di) + std::abs(dj) > 2) continue;
                int i = sr.i + di, j = sr.j + dj;
                if (!sr.valid || i < 0 || j < 0 || i >= res || j >= res) continue;
                if (atlas.comp_of[sr.chart][static_cast<size_t>(g.flat(i, j))] != comp.id) continue;
                int id = atlas.component_near(map.evaluate(g.pixel_point(sr.chart, i, j)), 3);
                if (id >= 0) votes[id]++;
            }
        }
        int best_id = -1, best_n = 0;
        for (auto& [id, nvotes] : votes)
            if (nvotes > best_n) {
                best_n = nvotes;
                best_id = id;
            }
        comp.image_id = best_id;
    }

    // Periodic components contain a cycle point; that point is the center.
    for (size_t c = 0; c < g.cycles.size(); ++c) {
        const auto& cyc = g.cycles[c];
        for (const auto& p : cyc) {
            int id = atlas.component_near(p, 2);
            if (id < 0) continue;
            auto& comp = atlas.components[static_cast<size_t>(id)];
            comp.center = p;
            comp.preperiod = 0;
        }
    }
    // Component cycle period: follow image ids.
    for (auto& comp : atlas.components) {
        if (comp.preperiod != 0) continue;
        int steps = 0, cur = comp.image_id;
        while (cur >= 0 && cur != comp.id && steps < next_id + 1) {
            cur = atlas.components[static_cast<size_t>(cur)].image_id;
            steps++;
        }
        comp.period = (cur == comp.id) ? steps + 1 : 0;
    }

    // Mark non-cycle components preperiodic and resolve centers by pulling
    // back the image center, choosing the preimage inside the component.
    std::vector<bool> resolved(static_cast<size_t>(next_id), false);
    for (auto& comp : atlas.components) {
        bool on_cycle = false;
        for (size_t c = 0; c < g.cycles.size() && !on_cycle; ++c)
            for (const auto& p : g.cycles[c])
                if (atlas.component_near(p, 2) == comp.id) on_cycle = true;
        if (on_cycle) resolved[static_cast<size_t>(comp.id)] = true;
        else comp.preperiod = -1;  // unresolved marker
    }
    bool progress = true;
    while (progress) {
        progress = false;
        for (auto& comp : atlas.components) {
            if (resolved[static_cast<size_t>(comp.id)]) continue;
            if (comp.image_id < 0 || !resolved[static_cast<size_t>(comp.image_id)]) continue;
            const auto& img = atlas.components[static_cast<size_t>(comp.image_id)];
            SpherePoint best;
            bool found = false;
            double best_d = std::numeric_limits<double>::infinity();
            const SpherePoint& seed = seeds[static_cast<size_t>(comp.id)];
            for (auto& [p, m] : map.preimages(img.center)) {
                if (atlas.component_near(p, 1) == comp.id) {
                    best = p;
                    found = true;
                    break;
                }
                double d = chordal(p, seed);
                if (d < best_d) {
                    best_d = d;
                    best = p;
                }
            }
            // fall back to the preimage nearest the deep seed when the pixel
            // membership test misses (small components)
            if (!found && best_d > std::max(6.0 * atlas.grid.pixel_size(seed), 1.2 * comp.diameter))
                continue;  // dynamics not certifiable at this raster scale
            comp.center = best;
            comp.preperiod = img.preperiod + 1;
            comp.period = img.period;
            resolved[static_cast<size_t>(comp.id)] = true;
            progress = true;
        }
    }

    // Drop components whose dynamics did not resolve (sub-raster noise near
    // fine structure); keep cycle components mandatory.
    {
        std::vector<bool> keep(static_cast<size_t>(next_id), true);
        for (auto& comp : atlas.components) {
            if (!resolved[static_cast<size_t>(comp.id)]) {
                if (comp.preperiod == 0 && comp.period > 0)
                    throw CenterNotFound("cycle component dynamics did not resolve");
                keep[static_cast<size_t>(comp.id)] = false;
            }
        }
        bool cascade = true;
        while (cascade) {
            cascade = false;
            for (auto& comp : atlas.components) {
                if (!keep[static_cast<size_t>(comp.id)]) continue;
                if (comp.image_id < 0 || !keep[static_cast<size_t>(comp.image_id)]) {
                    if (comp.image_id >= 0 || !comp.is_periodic()) {
                        keep[static_cast<size_t>(comp.id)] = false;
                        cascade = true;
                    }
                }
            }
        }
        std::vector<int> remap(static_cast<size_t>(next_id), -1);
        int nid = 0;
        for (int id = 0; id < next_id; ++id)
            if (keep[static_cast<size_t>(id)]) remap[static_cast<size_t>(id)] = nid++;
        if (nid != next_id) {
            std::vector<FatouComponent> kept;
            for (auto& comp : atlas.components) {
                if (!keep[static_cast<size_t>(comp.id)]) continue;
                FatouComponent c = comp;
                c.id = remap[static_cast<size_t>(comp.id)];
                c.image_id = comp.image_id >= 0 ? remap[static_cast<size_t>(comp.image_id)] : -1;
                kept.push_back(c);
            }
            atlas.components = std::move(kept);
            for (int chart = 0; chart < 2; ++chart)
                for (auto& v : atlas.comp_of[chart])
                    if (v >= 0) v = remap[static_cast<size_t>(v)];
        }
    }

    // delta_U from critical points inside. Critical points on the Julia
    // raster (e.g. poles mapping to repelling fixed points) belong to no
    // component even when their pixel is labeled.
    for (auto& comp : atlas.components) {
        int delta = 1;
        for (auto& [cp, dloc] : pcf.critical_points) {
            if (atlas.component_at(cp) != comp.id) continue;
            if (g.near_julia(cp, 1.0)) continue;
            delta += dloc - 1;
        }
        comp.degree_on_component = delta;
    }
    return atlas;
}

}  // namespace dynamo
