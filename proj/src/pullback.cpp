#include "dynamo/pullback.hpp"

#include <algorithm>
#include <queue>

namespace dynamo {

LiftedArc lift_arc(const RationalMap& map, const std::vector<SpherePoint>& arc,
                   const SpherePoint& w0, double lift_tol, double step_floor) {
    if (arc.size() < 2) throw std::invalid_argument("lift_arc: arc too short");
    LiftedArc out;
    out.branch_start = w0;
    if (chordal(map.evaluate(w0), arc.front()) > 1e-6)
        throw ContinuationLost("lift_arc: branch start does not map to the arc front");
    out.polyline.push_back(w0);
    out.max_residual = chordal(map.evaluate(w0), arc.front());

    SpherePoint w = w0;
    double last_step = 0.0;
    const double max_gap = 8e-3;  // keeps chord sagitta negligible downstream
    for (size_t k = 1; k < arc.size(); ++k) {
        // pending targets between arc[k-1] and arc[k]; subdivide on trouble
        // and whenever the lifted step stretches past max_gap
        bool inv = home_inverted(arc[k - 1]);
        cplx a = chart_coord(arc[k - 1], inv);
        cplx b = chart_coord(arc[k], inv);
        double seg = chordal(arc[k - 1], arc[k]);
        std::vector<double> stack{1.0};
        double at = 0.0;
        while (!stack.empty()) {
            double t = stack.back();
            SpherePoint target = from_chart(a + (b - a) * t, inv);
            auto sol = map.newton_preimage(target, 1, w, 1e-13, 24);
            double trust = std::min(8.0 * std::max(seg, last_step) + 1e-9, max_gap);
            bool ok = sol.has_value() && chordal(*sol, w) <= trust;
            if (ok) {
                double res = chordal(map.evaluate(*sol), target);
                if (res > lift_tol) ok = false;
                if (ok) {
                    last_step = chordal(*sol, w);
                    w = *sol;
                    at = t;
                    stack.pop_back();
                    out.polyline.push_back(w);
                    out.max_residual = std::max(out.max_residual, res);
                    continue;
                }
            }
            double mid = 0.5 * (at + t);
            if (t - at < step_floor) {
                // a critical value pinching the continuation?
                double dc = std::numeric_limits<double>::infinity();
                for (auto& [cp, dl] : map.critical_points())
                    dc = std::min(dc, chordal(map.evaluate(cp), target));
                if (dc < 1e-6)
                    throw CriticalValueOnArc("lift_arc: arc passes through a critical value",
                                             (static_cast<double>(k - 1) + t) /
                                                 static_cast<double>(arc.size() - 1));
                throw ContinuationLost("lift_arc: continuation stalled");
            }
            stack.push_back(mid);
        }
    }
    return out;
}

namespace {

// one pullback level
PullbackGraph pull_once(const RationalMap& map, const PostcriticalData& pcf, const PlanarGraph& G,
                        double lift_tol, double snap) {
    PullbackGraph H;

    // split edges at interior critical values
    std::vector<Edge> work;
    std::vector<SpherePoint> crit_values;
    for (auto& [cp, dl] : pcf.critical_points) crit_values.push_back(map.evaluate(cp));
    for (const auto& e : G.edges) {
        std::vector<Edge> pieces{e};
        for (const auto& v : crit_values) {
            std::vector<Edge> next;
            for (auto& piece : pieces) {
                size_t split = 0;
                double best = 4.0 * snap;
                for (size_t i = 1; i + 1 < piece.polyline.size(); ++i) {
                    double d = chordal(piece.polyline[i], v);
                    if (d < best) {
                        best = d;
                        split = i;
                    }
                }
                if (split == 0) {
                    next.push_back(piece);
                    continue;
                }
                Edge e1, e2;
                e1.polyline.assign(piece.polyline.begin(),
                                   piece.polyline.begin() + static_cast<long>(split) + 1);
                e1.polyline.back() = v;
                e2.polyline.assign(piece.polyline.begin() + static_cast<long>(split),
                                   piece.polyline.end());
                e2.polyline.front() = v;
                e1.id = piece.id;
                e2.id = piece.id;
                next.push_back(e1);
                next.push_back(e2);
            }
            pieces = next;
        }
        for (auto& p : pieces) work.push_back(p);
    }
    H.split_edges = static_cast<int>(work.size());

    // vertex set: preimages of all endpoint positions occurring in the work list
    auto find_or_add = [&](const SpherePoint& p, VertexKind kind) {
        int id = H.graph.find_vertex(p, snap);
        if (id >= 0) return id;
        return H.graph.add_vertex(p, kind);
    };
    for (const auto& v : G.vertices) {
        for (auto& [p, m] : map.preimages(v.pos)) find_or_add(p, v.kind);
    }
    // split points are critical values: add their preimages (critical points)
    for (const auto& vpt : crit_values) {
        for (auto& [p, m] : map.preimages(vpt)) find_or_add(p, VertexKind::JuliaPoint);
    }

    // lift every work edge from every branch over each preimage of its front
    int branch_counter = 0;
    for (const auto& e : work) {
        if (e.polyline.size() < 2) continue;
        const SpherePoint front = e.polyline.front();
        for (auto& [w0, mult] : map.preimages(front)) {
            std::vector<SpherePoint> seeds;
            if (mult == 1) {
                seeds.push_back(w0);
            } else {
                // sector seeds around a critical preimage
                LocalSeries ls = map.local_series(w0, mult + 3);
                cplx lead = ls.s[static_cast<size_t>(mult)];
                // target offset of the second sample in the image chart
                cplx img0 = ls.s[0];
                bool oinv = ls.out_inverted;
                // find the first arc sample clearly away from the front
                size_t k1 = 1;
                while (k1 + 1 < e.polyline.size() && chordal(e.polyline[k1], front) < 16 * snap) k1++;
                cplx tgt = chart_coord(e.polyline[k1], oinv) - img0;
                if (std::abs(lead) < 1e-300) continue;
                cplx zeta_m = tgt / lead;
                double rho = std::pow(std::abs(zeta_m), 1.0 / mult);
                double phi = std::arg(zeta_m) / mult;
                for (int j = 0; j < mult; ++j) {
                    cplx zeta = rho * std::exp(cplx(0, phi + 2 * M_PI * j / mult));
                    cplx c0 = chart_coord(w0, ls.in_inverted);
                    seeds.push_back(from_chart(c0 + zeta, ls.in_inverted));
                }
            }
            for (const auto& seed : seeds) {
                H.lifts_before_merge++;
                LiftedArc lift;
                if (mult == 1) {
                    lift = lift_arc(map, e.polyline, seed, lift_tol);
                } else {
                    // start the continuation off the critical point
                    size_t k1 = 1;
                    while (k1 + 1 < e.polyline.size() &&
                           chordal(e.polyline[k1], front) < 16 * snap)
                        k1++;
                    auto sol = map.newton_preimage(e.polyline[k1], 1, seed, 1e-13, 30);
                    if (!sol) throw ContinuationLost("lift_arc: sector seed did not converge");
                    std::vector<SpherePoint> rest(e.polyline.begin() + static_cast<long>(k1),
                                                  e.polyline.end());
                    lift = lift_arc(map, rest, *sol, lift_tol);
                    // fill the stretched gap at the critical start along the
                    // local m-th-root scaling
                    std::vector<SpherePoint> infill;
                    bool ginv = home_inverted(w0);
                    cplx g0 = chart_coord(w0, ginv);
                    cplx gx = chart_coord(*sol, ginv) - g0;
                    SpherePoint prev = *sol;
                    bool ainv = home_inverted(e.polyline[0]);
                    cplx aa = chart_coord(e.polyline[0], ainv);
                    cplx ab = chart_coord(e.polyline[k1], ainv) - aa;
                    for (int j = 1; j <= 6; ++j) {
                        double xfrac = std::pow(0.5, j);
                        double tfrac = std::pow(xfrac, mult);
                        SpherePoint tgt = from_chart(aa + ab * tfrac, ainv);
                        auto pj = map.newton_preimage(
                            tgt, 1, from_chart(g0 + gx * xfrac, ginv), 1e-13, 24);
                        if (!pj) break;
                        infill.push_back(*pj);
                        prev = *pj;
                    }
                    (void)prev;
                    lift.polyline.insert(lift.polyline.begin(), infill.rbegin(), infill.rend());
                    lift.polyline.insert(lift.polyline.begin(), w0);
                    lift.branch_start = w0;
                }
                lift.source_edge = e.id;

                int va = H.graph.find_vertex(lift.polyline.front(), 4 * snap);
                int vb = H.graph.find_vertex(lift.polyline.back(), 4 * snap);
                if (va < 0 || vb < 0)
                    throw AssemblyMismatch("pullback: lift endpoint snaps to no preimage vertex");
                lift.polyline.front() = H.graph.vertices[static_cast<size_t>(va)].pos;
                lift.polyline.back() = H.graph.vertices[static_cast<size_t>(vb)].pos;
                if (va == vb) continue;  // degenerate sliver after snapping

                // drop duplicate lifts (two seeds converging to one branch)
                bool dup = false;
                for (const auto& [eid, prov] : H.provenance) {
                    const Edge& other = H.graph.edges[static_cast<size_t>(eid)];
                    if (prov.source_edge != e.id) continue;
                    if ((other.v0 != va || other.v1 != vb) && (other.v0 != vb || other.v1 != va))
                        continue;
                    size_t mid = lift.polyline.size() / 2;
                    if (dist_to_polyline(lift.polyline[mid], other.polyline) < 8 * snap) dup = true;
                }
                if (dup) continue;

                int eid = H.graph.add_edge(va, vb, lift.polyline);
                H.provenance[eid] = {e.id, branch_counter++};
            }
        }
    }

    // marked set carries over (marked points are forward-invariant vertices)
    for (int mid : G.marked_P) {
        int v = H.graph.find_vertex(G.vertices[static_cast<size_t>(mid)].pos, 4 * snap);
        if (v >= 0) H.graph.marked_P.push_back(v);
    }
    if (!H.graph.connected())
        throw AssemblyMismatch("pullback: preimage complex is not connected");
    return H;
}

}  // namespace

PullbackGraph pullback_graph(const RationalMap& map, const PostcriticalData& pcf,
                             const PlanarGraph& G, int n, double lift_tol, double snap) {
    if (n <= 0) {
        PullbackGraph H;
        H.graph = G;
        return H;
    }
    PullbackGraph H = pull_once(map, pcf, G, lift_tol, snap);
    for (int k = 1; k < n; ++k) H = pull_once(map, pcf, H.graph, lift_tol, snap);
    return H;
}

PlanarGraph select_isotopic(const PlanarGraph& G_ref, const PullbackGraph& H, double tube_radius) {
    const PlanarGraph& Hg = H.graph;
    PlanarGraph out;
    out.vertices = G_ref.vertices;
    out.marked_P = G_ref.marked_P;

    // endpoint correspondence
    std::vector<int> h_of_ref(G_ref.vertices.size(), -1);
    for (const auto& v : G_ref.vertices) h_of_ref[static_cast<size_t>(v.id)] = Hg.find_vertex(v.pos, 1e-6);

    for (const auto& e : G_ref.edges) {
        int hs = h_of_ref[static_cast<size_t>(e.v0)];
        int ht = h_of_ref[static_cast<size_t>(e.v1)];
        if (hs < 0 || ht < 0)
            throw NoLiftInTube("select_isotopic: reference endpoint missing from the pullback", e.id);

        // admissible H edges: polyline within the tube around e
        SegmentIndex ref_index({e.polyline});
        std::vector<char> ok(Hg.edges.size(), 0);
        std::vector<double> weight(Hg.edges.size(), 0.0);
        for (const auto& he : Hg.edges) {
            double worst = 0.0, score = 0.0;
            for (size_t i = 0; i < he.polyline.size(); ++i) {
                double d = ref_index.distance(he.polyline[i]);
                worst = std::max(worst, d);
                if (worst > tube_radius) break;
                double ds = i + 1 < he.polyline.size()
                                ? chordal(he.polyline[i], he.polyline[i + 1])
                                : 0.0;
                score += ds * (d + 0.02 * tube_radius);
            }
            if (worst <= tube_radius) {
                ok[static_cast<size_t>(he.id)] = 1;
                weight[static_cast<size_t>(he.id)] = score + 1e-12;
            }
        }

        // Dijkstra from hs to ht over admissible edges
        size_t nv = Hg.vertices.size();
        std::vector<double> dist(nv, std::numeric_limits<double>::infinity());
        std::vector<std::pair<int, int>> prev(nv, {-1, -1});  // (vertex, edge)
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist[static_cast<size_t>(hs)] = 0.0;
        pq.push({0.0, hs});
        while (!pq.empty()) {
            auto [d0, v] = pq.top();
            pq.pop();
            if (d0 > dist[static_cast<size_t>(v)]) continue;
            if (v == ht) break;
            for (const auto& he : Hg.edges) {
                if (!ok[static_cast<size_t>(he.id)]) continue;
                int u = -1;
                if (he.v0 == v) u = he.v1;
                else if (he.v1 == v) u = he.v0;
                if (u < 0) continue;
                double nd = d0 + weight[static_cast<size_t>(he.id)];
                if (nd < dist[static_cast<size_t>(u)]) {
                    dist[static_cast<size_t>(u)] = nd;
                    prev[static_cast<size_t>(u)] = {v, he.id};
                    pq.push({nd, u});
                }
            }
        }
        if (!(dist[static_cast<size_t>(ht)] < std::numeric_limits<double>::infinity()))
            throw NoLiftInTube("select_isotopic: no admissible path in the tube", e.id);

        // reconstruct the path polyline from ht back to hs
        std::vector<SpherePoint> pl;
        int cur = ht;
        std::vector<std::pair<int, int>> chain;  // (edge, arriving vertex)
        while (cur != hs) {
            auto [pv, pe] = prev[static_cast<size_t>(cur)];
            chain.push_back({pe, cur});
            cur = pv;
        }
        std::reverse(chain.begin(), chain.end());
        pl.push_back(G_ref.vertices[static_cast<size_t>(e.v0)].pos);
        int at = hs;
        for (auto& [eid, arrive] : chain) {
            const Edge& he = Hg.edges[static_cast<size_t>(eid)];
            if (he.v0 == at) {
                pl.insert(pl.end(), he.polyline.begin() + 1, he.polyline.end());
            } else {
                for (size_t i = he.polyline.size() - 1; i-- > 0;) pl.push_back(he.polyline[i]);
            }
            at = arrive;
        }
        pl.back() = G_ref.vertices[static_cast<size_t>(e.v1)].pos;
        out.add_edge(e.v0, e.v1, std::move(pl));
    }
    return out;
}

}  // namespace dynamo
