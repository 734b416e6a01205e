#include "dynamo/access.hpp"

#include <algorithm>
#include <map>

namespace dynamo {

namespace {

// Landing distance of the ray at this angle to z; +inf on tracing failure.
// The certification tolerance is soft: valley scanning needs estimates, not
// certificates, and generic angles have slow Holder tails.
double landing_distance(const BottcherSystem& bott, int comp, double theta, const SpherePoint& z,
                        double cert_tol, SpherePoint* landing = nullptr,
                        SpherePoint* approach = nullptr) {
    try {
        InternalRay ray = bott.trace_ray(comp, theta, 0.9995, 5e-3);
        SpherePoint lp = bott.land_ray(ray, cert_tol);
        if (landing) *landing = lp;
        if (approach) *approach = ray.polyline.back();
        return chordal(lp, z);
    } catch (const std::exception&) {
        return std::numeric_limits<double>::infinity();
    }
}

}  // namespace

AccessRecord acc_estimate(const FatouAtlas& atlas, const BottcherSystem& bott,
                          const SpherePoint& z, int angle_budget, double land_tol) {
    AccessRecord rec;
    rec.z = z;
    const BasinGrid& g = atlas.grid;
    if (!g.near_julia(z, 2.5)) throw Unresolvable("acc_estimate: point not on the Julia raster");

    double px = g.pixel_size(z);
    rec.dom = atlas.components_touching(z, 2.5 * px);
    if (rec.dom.empty()) {
        rec.type_tag = "buried";
        return rec;
    }

    double hit_tol = std::max(30.0 * land_tol, 3e-6);
    for (int U : rec.dom) {
        if (!bott.chart(U).usable) continue;
        int N = angle_budget;
        const double soft = 0.01;
        std::vector<double> d(static_cast<size_t>(N));
        for (int k = 0; k < N; ++k)
            d[static_cast<size_t>(k)] =
                landing_distance(bott, U, static_cast<double>(k) / N, z, soft);
        for (int k = 0; k < N; ++k) {
            double dm = d[static_cast<size_t>((k + N - 1) % N)];
            double dp = d[static_cast<size_t>((k + 1) % N)];
            double dc = d[static_cast<size_t>(k)];
            if (!(dc <= dm && dc <= dp)) continue;
            if (dc > 0.5) continue;
            // zoom refinement of the landing-distance valley; tolerant of
            // sporadic tracing failures near critical-point passages
            double lo = (k - 1.0) / N, hi = (k + 1.0) / N;
            double theta = static_cast<double>(k) / N;
            double best = dc;
            std::vector<double> history{best};
            for (int round = 0; round < 16 && hi - lo > 1e-12; ++round) {
                const int M = 8;
                double tbest = theta;
                for (int s = 0; s <= M; ++s) {
                    double th = lo + (hi - lo) * s / M;
                    double ds = landing_distance(bott, U, th, z, soft);
                    if (ds < best) {
                        best = ds;
                        tbest = th;
                    }
                }
                theta = tbest;
                double w = (hi - lo) / M;
                lo = theta - w;
                hi = theta + w;
                history.push_back(best);
                if (best < 0.3 * land_tol) break;
                // bail out of valleys that do not deepen
                if (round >= 2 && best > 0.6 * dc && best > 0.05) break;
            }
            // a landing at z shows up either as a hard hit or as a steady
            // power-law decay of the valley minimum (low Holder exponents at
            // pinch points keep the distance visibly positive)
            bool decay_ok = history.size() >= 7 &&
                            best <= 0.25 * history[history.size() - 7] && best < 0.03;
            if (!(best < hit_tol || decay_ok)) continue;
            SpherePoint landing, approach;
            double dist = landing_distance(bott, U, theta, z, soft, &landing, &approach);
            if (!(dist < hit_tol || decay_ok)) continue;
            theta -= std::floor(theta);
            bool dup = false;
            for (auto& r : rec.acc) {
                double diff = r.angle - theta;
                diff -= std::round(diff);
                if (r.component_id == U && std::abs(diff) < 1e-3) dup = true;
            }
            if (!dup) rec.acc.push_back({U, theta, approach});
        }
    }

    // semi-buried: on no boundary of a complement region above the cutoff
    rec.semi_buried = true;
    if (rec.dom.size() == 1) {
        const auto& dec = atlas.complement_of(rec.dom[0]);
        PixelRef pr = g.locate(z);
        for (int chart = 0; chart < 2 && rec.semi_buried; ++chart) {
            PixelRef r = g.locate_in_chart(z, chart);
            if (!r.valid) continue;
            for (int di = -2; di <= 2 && rec.semi_buried; ++di) {
                for (int dj = -2; dj <= 2 && rec.semi_buried; ++dj) {
                    int i = r.i + di, j = r.j + dj;
                    if (i < 0 || j < 0 || i >= g.resolution || j >= g.resolution) continue;
                    int rg = dec.region_of[chart][static_cast<size_t>(g.flat(i, j))];
                    if (rg < 0) continue;
                    const auto& reg = dec.regions[static_cast<size_t>(rg)];
                    if (reg.has_fatou && reg.diameter >= atlas.min_diameter) rec.semi_buried = false;
                }
            }
        }
        (void)pr;
    } else {
        rec.semi_buried = false;
    }

    // classification counts the components that actually carry landing rays;
    // the raster dom can over-include near accumulation points
    std::vector<int> eff_dom;
    for (const auto& r : rec.acc)
        if (std::find(eff_dom.begin(), eff_dom.end(), r.component_id) == eff_dom.end())
            eff_dom.push_back(r.component_id);
    size_t nd = eff_dom.size(), na = rec.acc.size();
    if (na == 0) {
        rec.type_tag = "unresolvable";
        return rec;
    }
    if (nd == 1 && na == 1) {
        rec.type_tag = rec.semi_buried ? "1b" : "1a";
    } else if (nd == 2 && na == 2) {
        // 2a when the two boundaries share an arc through z on the raster
        int U = eff_dom[0], V = eff_dom[1];
        PixelRef r = g.locate(z);
        int both = 0;
        double amin = 10, amax = -10;
        if (r.valid) {
            int rad = 8;
            for (int di = -rad; di <= rad; ++di) {
                for (int dj = -rad; dj <= rad; ++dj) {
                    int i = r.i + di, j = r.j + dj;
                    if (i < 0 || j < 0 || i >= g.resolution || j >= g.resolution) continue;
                    int dd = std::abs(di) + std::abs(dj);
                    if (dd < 2) continue;
                    SpherePoint p = g.pixel_point(r.chart, i, j);
                    auto near_ids = atlas.components_touching(p, 2.0 * g.pixel_size(p));
                    bool hasU = std::find(near_ids.begin(), near_ids.end(), U) != near_ids.end();
                    bool hasV = std::find(near_ids.begin(), near_ids.end(), V) != near_ids.end();
                    if (hasU && hasV) {
                        both++;
                        double a = std::atan2(static_cast<double>(di), static_cast<double>(dj));
                        amin = std::min(amin, a);
                        amax = std::max(amax, a);
                    }
                }
            }
        }
        if (both >= 4 && amax - amin > M_PI * 0.9) rec.type_tag = "2a";
        else if (both >= 1) rec.type_tag = "2b";
        else rec.type_tag = "unresolvable";
    } else if (nd == na && nd >= 3) {
        rec.type_tag = "3";
    } else if (na > nd) {
        rec.type_tag = rec.semi_buried ? "4b" : "4a";
    } else {
        rec.type_tag = "unresolvable";
    }
    return rec;
}

std::vector<TripleCluster> triple_boundary_clusters(const FatouAtlas& atlas) {
    const BasinGrid& g = atlas.grid;
    int res = g.resolution;
    std::map<std::array<int, 3>, std::vector<SpherePoint>> hits;
    for (int chart = 0; chart < 2; ++chart) {
        for (int i = 0; i < res; ++i) {
            for (int j = 0; j < res; ++j) {
                if (!g.is_home(chart, i, j)) continue;
                std::vector<int> ids;
                for (int di = -2; di <= 2; ++di) {
                    for (int dj = -2; dj <= 2; ++dj) {
                        int ni = i + di, nj = j + dj;
                        if (ni < 0 || nj < 0 || ni >= res || nj >= res) continue;
                        int v = atlas.comp_of[chart][static_cast<size_t>(g.flat(ni, nj))];
                        if (v >= 0 && std::find(ids.begin(), ids.end(), v) == ids.end())
                            ids.push_back(v);
                    }
                }
                if (ids.size() < 3) continue;
                std::sort(ids.begin(), ids.end());
                for (size_t a = 0; a < ids.size(); ++a)
                    for (size_t b = a + 1; b < ids.size(); ++b)
                        for (size_t c = b + 1; c < ids.size(); ++c)
                            hits[{ids[a], ids[b], ids[c]}].push_back(g.pixel_point(chart, i, j));
            }
        }
    }
    std::vector<TripleCluster> out;
    for (auto& [triple, pts] : hits) {
        TripleCluster tc;
        tc.triple = triple;
        // greedy clustering at a few pixel radii
        std::vector<bool> used(pts.size(), false);
        for (size_t a = 0; a < pts.size(); ++a) {
            if (used[a]) continue;
            std::vector<SpherePoint> members{pts[a]};
            used[a] = true;
            bool grew = true;
            while (grew) {
                grew = false;
                for (size_t b = 0; b < pts.size(); ++b) {
                    if (used[b]) continue;
                    for (auto& m : members) {
                        if (chordal(pts[b], m) < 4.0 * g.pixel_size(m)) {
                            members.push_back(pts[b]);
                            used[b] = true;
                            grew = true;
                            break;
                        }
                    }
                }
            }
            // cluster center = member closest to the mean embedding
            std::array<double, 3> mean{0, 0, 0};
            for (auto& m : members) {
                auto e = m.embed();
                for (int k = 0; k < 3; ++k) mean[static_cast<size_t>(k)] += e[static_cast<size_t>(k)];
            }
            SpherePoint center = members[0];
            double best = std::numeric_limits<double>::infinity();
            for (auto& m : members) {
                auto e = m.embed();
                double d = 0;
                for (int k = 0; k < 3; ++k) {
                    double t = e[static_cast<size_t>(k)] - mean[static_cast<size_t>(k)] / members.size();
                    d += t * t;
                }
                if (d < best) {
                    best = d;
                    center = m;
                }
            }
            tc.centers.push_back(center);
        }
        out.push_back(tc);
    }
    return out;
}

}  // namespace dynamo
