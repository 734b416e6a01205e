#include "dynamo/bottcher.hpp"

#include <algorithm>
#include <cmath>

namespace dynamo {

namespace {

// Bottcher series of the return map: phi(F(t)) = phi(t)^Delta, solved
// coefficient by coefficient. F must have exact order Delta >= 2.
Poly bottcher_series(const Poly& F, int Delta, int K) {
    cplx A = F[static_cast<size_t>(Delta)];
    Poly phi(static_cast<size_t>(K), cplx(0, 0));
    phi[1] = std::pow(A, 1.0 / (Delta - 1));
    cplx denom = static_cast<double>(Delta) * std::pow(phi[1], Delta - 1);
    for (int k = 2; k < K; ++k) {
        int n = Delta + k - 1;
        if (n >= K) break;
        Poly L = series_compose(phi, F, n + 1);
        Poly R = series_pow(phi, Delta, n + 1);
        phi[static_cast<size_t>(k)] = (L[static_cast<size_t>(n)] - R[static_cast<size_t>(n)]) / denom;
    }
    return phi;
}

int series_order(const Poly& s, double tol = 1e-9) {
    double scale = 0.0;
    for (auto& c : s) scale = std::max(scale, std::abs(c));
    for (size_t i = 1; i < s.size(); ++i)
        if (std::abs(s[i]) > tol * scale) return static_cast<int>(i);
    return -1;
}

}  // namespace

BottcherSystem::BottcherSystem(const FatouAtlas& atlas, int series_terms)
    : atlas_(&atlas), K_(series_terms) {
    const auto& comps = atlas.components;
    charts_.resize(comps.size());
    int n = static_cast<int>(comps.size());
    for (int id = 0; id < n; ++id) {
        auto& ch = charts_[static_cast<size_t>(id)];
        ch.component_id = id;
        ch.delta = comps[static_cast<size_t>(id)].degree_on_component;
        ch.inverted = home_inverted(comps[static_cast<size_t>(id)].center);
        ch.c0 = chart_coord(comps[static_cast<size_t>(id)].center, ch.inverted);
    }

    // f's local series at each center, written into the image chart.
    std::vector<Poly> floc(static_cast<size_t>(n));
    for (int id = 0; id < n; ++id) {
        const auto& comp = comps[static_cast<size_t>(id)];
        if (comp.image_id < 0) continue;
        const auto& img_ch = charts_[static_cast<size_t>(comp.image_id)];
        try {
            LocalSeries ls = atlas.map.local_series(comp.center, K_, img_ch.inverted);
            if (std::abs(ls.s[0] - img_ch.c0) > 1e-7) continue;  // centers disagree
            ls.s[0] = 0.0;
            int ord = series_order(ls.s);
            if (ord != charts_[static_cast<size_t>(id)].delta) continue;  // extra critical point in U
            floc[static_cast<size_t>(id)] = ls.s;
        } catch (const std::exception&) {
            continue;
        }
    }

    // Cycles: anchor at the smallest id, Bottcher series of the composed
    // return map, then jets pushed forward around the cycle.
    std::vector<bool> have_jet(static_cast<size_t>(n), false);
    for (int id = 0; id < n; ++id) {
        const auto& comp = comps[static_cast<size_t>(id)];
        if (!comp.is_periodic()) continue;
        // collect cycle starting here; only handle if id is the minimum
        std::vector<int> cyc{id};
        int cur = comp.image_id;
        bool ok = cur >= 0;
        while (ok && cur != id) {
            cyc.push_back(cur);
            cur = comps[static_cast<size_t>(cur)].image_id;
            ok = cur >= 0 && static_cast<int>(cyc.size()) <= n;
        }
        if (!ok || *std::min_element(cyc.begin(), cyc.end()) != id) continue;
        int q = static_cast<int>(cyc.size());
        bool have_all = true;
        for (int u : cyc)
            if (floc[static_cast<size_t>(u)].empty()) have_all = false;
        if (!have_all) continue;

        Poly F(static_cast<size_t>(K_), cplx(0, 0));
        F[1] = 1.0;
        for (int s = 0; s < q; ++s) F = series_compose(floc[static_cast<size_t>(cyc[static_cast<size_t>(s)])], F, K_);
        int Delta = series_order(F);
        if (Delta < 2) continue;
        Poly phi = bottcher_series(F, Delta, K_);
        charts_[static_cast<size_t>(id)].jet = phi;
        charts_[static_cast<size_t>(id)].cycle_period = q;
        charts_[static_cast<size_t>(id)].cycle_deg = Delta;
        have_jet[static_cast<size_t>(id)] = true;

        // forward push around the cycle: phi_{i+1}(floc_i(t)) = phi_i(t)^{delta_i}
        for (int s = 0; s + 1 < q; ++s) {
            int u = cyc[static_cast<size_t>(s)], v = cyc[static_cast<size_t>(s + 1)];
            int du = charts_[static_cast<size_t>(u)].delta;
            Poly S = series_pow(charts_[static_cast<size_t>(u)].jet, du, K_);
            charts_[static_cast<size_t>(v)].jet =
                series_decompose(S, floc[static_cast<size_t>(u)], du, K_);
            charts_[static_cast<size_t>(v)].cycle_period = q;
            charts_[static_cast<size_t>(v)].cycle_deg = Delta;
            have_jet[static_cast<size_t>(v)] = true;
        }
        for (int u : cyc) {
            charts_[static_cast<size_t>(u)].anchor_id = id;
        }
    }

    // Preperiodic jets: phi_U = delta-th root of phi_{f(U)} o floc_U.
    bool progress = true;
    while (progress) {
        progress = false;
        for (int id = 0; id < n; ++id) {
            if (have_jet[static_cast<size_t>(id)]) continue;
            int img = comps[static_cast<size_t>(id)].image_id;
            if (img < 0 || !have_jet[static_cast<size_t>(img)]) continue;
            if (floc[static_cast<size_t>(id)].empty()) continue;
            int d = charts_[static_cast<size_t>(id)].delta;
            Poly S = series_compose(charts_[static_cast<size_t>(img)].jet, floc[static_cast<size_t>(id)], K_);
            try {
                charts_[static_cast<size_t>(id)].jet = series_root(S, d, K_);
            } catch (const std::exception&) {
                continue;
            }
            have_jet[static_cast<size_t>(id)] = true;
            progress = true;
        }
    }

    // Routes to the anchor (through the preperiodic tail and around the cycle).
    for (int id = 0; id < n; ++id) {
        auto& ch = charts_[static_cast<size_t>(id)];
        if (!have_jet[static_cast<size_t>(id)]) continue;
        int cur = id, s = 0, m = 1;
        bool ok = true;
        while (true) {
            const auto& cur_ch = charts_[static_cast<size_t>(cur)];
            if (cur_ch.anchor_id == cur) break;  // reached an anchor
            int img = comps[static_cast<size_t>(cur)].image_id;
            if (img < 0 || s > 4 * n + 8) {
                ok = false;
                break;
            }
            m *= cur_ch.delta;
            cur = img;
            s++;
        }
        if (!ok) continue;
        ch.anchor_id = cur;
        ch.route_len = s;
        ch.route_deg = m;
        ch.cycle_period = charts_[static_cast<size_t>(cur)].cycle_period;
        ch.cycle_deg = charts_[static_cast<size_t>(cur)].cycle_deg;
    }

    // Jet radii: validated against the real map through the functional
    // equation, two passes so image radii settle.
    for (int id = 0; id < n; ++id) {
        auto& ch = charts_[static_cast<size_t>(id)];
        if (ch.jet.empty()) continue;
        double depth = atlas.depth_inside(comps[static_cast<size_t>(id)].center, id, 0.6);
        double chart_factor = (1.0 + std::norm(ch.c0)) / 2.0;
        ch.r_jet = std::max(1e-6, 0.7 * depth * chart_factor);
    }
    for (int pass = 0; pass < 2; ++pass) {
        for (int id = 0; id < n; ++id) {
            auto& ch = charts_[static_cast<size_t>(id)];
            if (ch.jet.empty()) continue;
            int img = comps[static_cast<size_t>(id)].image_id;
            const ComponentChart* ich = nullptr;
            if (img >= 0 && !charts_[static_cast<size_t>(img)].jet.empty())
                ich = &charts_[static_cast<size_t>(img)];
            double r = ch.r_jet;
            bool good = false;
            for (; r > 1e-9; r *= 0.8) {
                // series tail must be negligible
                double tail = 0.0;
                for (int k = K_ - 6; k < K_; ++k)
                    tail += std::abs(ch.jet[static_cast<size_t>(k)]) * std::pow(r, k);
                if (tail > 1e-12) continue;
                bool ok = true;
                for (int s = 0; s < 12 && ok; ++s) {
                    cplx t = r * std::exp(cplx(0, 2 * M_PI * s / 12.0));
                    cplx w = poly_eval(ch.jet, t);
                    if (std::abs(w) > 0.98) ok = false;
                    if (!ich) continue;
                    SpherePoint z = from_chart(ch.c0 + t, ch.inverted);
                    SpherePoint fz = atlas.map.evaluate(z);
                    cplx t2 = chart_coord(fz, ich->inverted) - ich->c0;
                    if (std::abs(t2) > 0.9 * ich->r_jet) {
                        ok = false;
                        continue;
                    }
                    cplx lhs = poly_eval(ich->jet, t2);
                    cplx rhs = std::pow(w, ch.delta);
                    if (std::abs(lhs - rhs) > 1e-11) ok = false;
                }
                if (ok) {
                    good = true;
                    break;
                }
            }
            ch.r_jet = good ? r : 0.0;
        }
    }
    // Inverse jets and their radii.
    for (int id = 0; id < n; ++id) {
        auto& ch = charts_[static_cast<size_t>(id)];
        if (ch.jet.empty() || ch.r_jet <= 0.0) continue;
        try {
            ch.inv_jet = series_revert(ch.jet, K_);
        } catch (const std::exception&) {
            continue;
        }
        double rho = std::abs(ch.jet[1]) * ch.r_jet * 0.8;
        for (; rho > 1e-10; rho *= 0.8) {
            bool ok = true;
            for (int s = 0; s < 8 && ok; ++s) {
                cplx w = rho * std::exp(cplx(0, 2 * M_PI * s / 8.0));
                cplx t = poly_eval(ch.inv_jet, w);
                if (std::abs(t) > ch.r_jet) {
                    ok = false;
                    continue;
                }
                if (std::abs(poly_eval(ch.jet, t) - w) > 1e-12) ok = false;
            }
            if (ok) break;
        }
        ch.r_jet_w = rho;
        ch.usable = ch.anchor_id >= 0 && rho > 1e-10 &&
                    charts_[static_cast<size_t>(ch.anchor_id)].r_jet_w > 0.0;
    }
    // anchors validated after the loop above; refresh usability
    for (auto& ch : charts_) {
        if (ch.anchor_id >= 0 && !charts_[static_cast<size_t>(ch.anchor_id)].inv_jet.empty() &&
            charts_[static_cast<size_t>(ch.anchor_id)].r_jet_w > 0.0 && ch.r_jet_w > 0.0)
            ch.usable = true;
    }
}

const ComponentChart& BottcherSystem::chart(int component_id) const {
    return charts_.at(static_cast<size_t>(component_id));
}

cplx BottcherSystem::jet_eval(const ComponentChart& ch, const SpherePoint& z) const {
    cplx t = chart_coord(z, ch.inverted) - ch.c0;
    return poly_eval(ch.jet, t);
}

SpherePoint BottcherSystem::inv_jet_eval(const ComponentChart& ch, cplx w) const {
    cplx t = poly_eval(ch.inv_jet, w);
    return from_chart(ch.c0 + t, ch.inverted);
}

double BottcherSystem::anchor_modulus(const ComponentChart& anchor, SpherePoint z,
                                      int* steps) const {
    const RationalMap& f = atlas_->map;
    int q = anchor.cycle_period, Delta = anchor.cycle_deg;
    for (int k = 0; k <= 400; ++k) {
        SpherePoint center = atlas_->components[static_cast<size_t>(anchor.component_id)].center;
        if (chordal(z, center) < 0.8) {
            cplx t = chart_coord(z, anchor.inverted) - anchor.c0;
            if (std::abs(t) <= anchor.r_jet) {
                double m = std::abs(poly_eval(anchor.jet, t));
                if (steps) *steps = k;
                if (m == 0.0) return 0.0;
                return std::exp(std::log(m) * std::pow(static_cast<double>(Delta), -k));
            }
        }
        z = f.iterate(z, q);
    }
    throw BranchLost("anchor_modulus: orbit did not reach the jet disk");
}

double BottcherSystem::modulus(int component_id, const SpherePoint& z) const {
    const ComponentChart& ch = chart(component_id);
    if (!ch.usable) throw OutsideComponent("modulus: no usable chart for component");
    const ComponentChart& anchor = chart(ch.anchor_id);
    SpherePoint t = atlas_->map.iterate(z, ch.route_len);
    double rA = anchor_modulus(anchor, t);
    return std::pow(rA, 1.0 / ch.route_deg);
}

SpherePoint BottcherSystem::anchor_inverse_seeded(const ComponentChart& anchor, cplx w,
                                                  const SpherePoint& seed) const {
    if (std::abs(w) <= anchor.r_jet_w) return inv_jet_eval(anchor, w);
    int q = anchor.cycle_period, Delta = anchor.cycle_deg;
    cplx wd = w;
    int k = 0;
    while (std::abs(wd) > 0.9 * anchor.r_jet_w) {
        cplx nw = wd;
        cplx acc = 1.0;
        for (int i = 0; i < Delta; ++i) acc *= nw;
        wd = acc;
        if (++k > 80) throw BranchLost("inverse: target too close to the boundary");
    }
    SpherePoint deep = inv_jet_eval(anchor, wd);
    auto sol = atlas_->map.newton_preimage(deep, q * k, seed, 1e-13, 60);
    if (!sol) throw BranchLost("inverse: Newton lift failed");
    return *sol;
}

SpherePoint BottcherSystem::inverse_seeded(int component_id, cplx w, const SpherePoint& seed) const {
    const ComponentChart& ch = chart(component_id);
    if (!ch.usable) throw OutsideComponent("inverse: no usable chart");
    if (std::abs(w) <= ch.r_jet_w) return inv_jet_eval(ch, w);
    const ComponentChart& anchor = chart(ch.anchor_id);
    cplx wA = 1.0;
    {
        cplx acc = w;
        // w^{route_deg}
        int e = ch.route_deg;
        wA = 1.0;
        while (e > 0) {
            if (e & 1) wA *= acc;
            acc *= acc;
            e >>= 1;
        }
    }
    SpherePoint seedA = atlas_->map.iterate(seed, ch.route_len);
    SpherePoint ZA = anchor_inverse_seeded(anchor, wA, seedA);
    if (ch.route_len == 0) return ZA;
    auto sol = atlas_->map.newton_preimage(ZA, ch.route_len, seed, 1e-13, 60);
    if (!sol) throw BranchLost("inverse: route lift failed");
    return *sol;
}

// Radial continuation along a fixed angle, from potential-log s0 down to s1
// (s = -log r, so decreasing s moves outward). Seeded step by step; appends
// intermediate points to `sink` when given.
SpherePoint BottcherSystem::radial_march(int component_id, double theta, double s0, double s1,
                                         SpherePoint z, double max_step,
                                         std::vector<SpherePoint>* sink,
                                         std::vector<double>* sink_radii) const {
    cplx dir = std::exp(cplx(0, 2 * M_PI * theta));
    double s = s0;
    double ds = std::max(1e-12, 0.25 * std::abs(s0 - s1));
    int stall = 0;
    long guard = 0;
    while (std::abs(s - s1) > 1e-15 * (1.0 + std::abs(s1))) {
        double sn = s1 < s ? std::max(s1, s - ds) : std::min(s1, s + ds);
        bool ok = true;
        SpherePoint zn;
        try {
            zn = inverse_seeded(component_id, std::exp(-sn) * dir, z);
            if (chordal(zn, z) > max_step) ok = false;
        } catch (const std::exception&) {
            ok = false;
        }
        if (ok) {
            double stepped = chordal(zn, z);
            z = zn;
            s = sn;
            stall = 0;
            if (sink) {
                sink->push_back(z);
                if (sink_radii) sink_radii->push_back(std::exp(-s));
            }
            if (stepped < 0.3 * max_step) ds *= 1.6;
        } else {
            ds *= 0.5;
            if (++stall > 120 || ds < 1e-16 * (1.0 + std::abs(s)))
                throw BranchLost("radial march stalled");
        }
        if (++guard > 200000) throw BranchLost("radial march budget exceeded");
    }
    return z;
}

SpherePoint BottcherSystem::inverse(int component_id, cplx w) const {
    const ComponentChart& ch = chart(component_id);
    if (!ch.usable) throw OutsideComponent("inverse: no usable chart");
    double rt = std::abs(w);
    if (rt <= ch.r_jet_w) return inv_jet_eval(ch, w);
    double theta = std::arg(w) / (2 * M_PI);
    double r = 0.8 * ch.r_jet_w;
    SpherePoint z = inv_jet_eval(ch, r * std::exp(cplx(0, 2 * M_PI * theta)));
    return radial_march(component_id, theta, -std::log(r), -std::log(rt), z, 0.02);
}

const BottcherSystem::RefRing& BottcherSystem::ref_ring(int component_id) const {
    auto it = rings_.find(component_id);
    if (it != rings_.end()) return it->second;
    RefRing ring;
    ring.r = 0.45;
    ring.points = equipotential(component_id, ring.r, kRingSamples);
    ring.points.pop_back();  // drop the closing duplicate
    auto [pos, ins] = rings_.emplace(component_id, std::move(ring));
    return pos->second;
}

// phi^{-1}(r e^{2pi i theta}) by honest continuation: an angular march along
// the reference ring followed by a radial march to the target radius. Every
// step is seeded from the previous point, which keeps the branch.
SpherePoint BottcherSystem::marched_point(int component_id, double r, double theta) const {
    const RefRing& ring = ref_ring(component_id);
    theta -= std::floor(theta);
    int N = static_cast<int>(ring.points.size());
    int k = static_cast<int>(std::lround(theta * N)) % N;
    double th0 = static_cast<double>(k) / N;
    SpherePoint z = ring.points[static_cast<size_t>(k)];
    // angular leg at the ring radius
    double dth = theta - th0;
    if (dth > 0.5) dth -= 1.0;
    if (dth < -0.5) dth += 1.0;
    int nsub = 1 + static_cast<int>(std::abs(dth) * 4 * N);
    for (int s = 1; s <= nsub; ++s) {
        double th = th0 + dth * s / nsub;
        z = inverse_seeded(component_id, ring.r * std::exp(cplx(0, 2 * M_PI * th)), z);
    }
    // radial leg
    return radial_march(component_id, theta, -std::log(ring.r), -std::log(r), z, 0.03);
}

cplx BottcherSystem::value(int component_id, const SpherePoint& z) const {
    const ComponentChart& ch = chart(component_id);
    if (!ch.usable) throw OutsideComponent("value: no usable chart");
    int at = atlas_->component_at(z);
    if (at >= 0 && at != component_id) throw OutsideComponent("value: point lies in another component");

    cplx t = chart_coord(z, ch.inverted) - ch.c0;
    if (std::abs(t) <= ch.r_jet) return poly_eval(ch.jet, t);

    double r = modulus(component_id, z);
    if (!(r < 1.0 - 1e-14)) throw BranchLost("value: modulus at the boundary");

    bool zin = home_inverted(z);
    cplx zc = chart_coord(z, zin);
    const RefRing& ring = ref_ring(component_id);
    int N = static_cast<int>(ring.points.size());

    // start angle: ring point nearest to z
    int k0 = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < N; ++k) {
        double d = chordal(ring.points[static_cast<size_t>(k)], z);
        if (d < best) {
            best = d;
            k0 = k;
        }
    }
    std::vector<double> starts{static_cast<double>(k0) / N, (k0 + 0.49) / N, (k0 - 0.49) / N,
                               (k0 + 1.3) / N, (k0 - 1.3) / N};
    for (double theta : starts) {
        try {
            SpherePoint P = marched_point(component_id, r, theta);
            for (int it = 0; it < 24; ++it) {
                cplx res = chart_coord(P, zin) - zc;
                if (std::abs(res) < 5e-13) {
                    double th = theta - std::floor(theta);
                    return r * std::exp(cplx(0, 2 * M_PI * th));
                }
                double h = 1e-7;
                SpherePoint Ph = inverse_seeded(component_id,
                                                r * std::exp(cplx(0, 2 * M_PI * (theta + h))), P);
                cplx T = (chart_coord(Ph, zin) - chart_coord(P, zin)) / h;
                double tn = std::norm(T);
                if (tn < 1e-300) break;
                double step = -(res.real() * T.real() + res.imag() * T.imag()) / tn;
                double cap = 0.6 / N;
                if (std::abs(step) > cap) step = step > 0 ? cap : -cap;
                theta += step;
                P = inverse_seeded(component_id, r * std::exp(cplx(0, 2 * M_PI * theta)), P);
            }
        } catch (const std::exception&) {
            continue;
        }
    }
    throw BranchLost("value: angle inversion failed");
}

InternalRay BottcherSystem::trace_ray(int component_id, double angle, double r_max,
                                      double ray_step) const {
    const ComponentChart& ch = chart(component_id);
    if (!ch.usable) throw OutsideComponent("trace_ray: no usable chart");
    if (r_max > 0.9999999) r_max = 0.9999999;
    InternalRay ray;
    ray.component_id = component_id;
    ray.angle = angle - std::floor(angle);

    const auto& comp = atlas_->components[static_cast<size_t>(component_id)];
    ray.polyline.push_back(comp.center);
    ray.radii.push_back(0.0);

    double r = 0.6 * ch.r_jet_w;
    cplx dir = std::exp(cplx(0, 2 * M_PI * ray.angle));
    SpherePoint z = inv_jet_eval(ch, r * dir);
    ray.polyline.push_back(z);
    ray.radii.push_back(r);

    radial_march(component_id, ray.angle, -std::log(r), -std::log(r_max), z, ray_step,
                 &ray.polyline, &ray.radii);
    return ray;
}

namespace {

// Newton solve for a fixed point of f^p near the seed, chart-aware.
std::optional<SpherePoint> newton_periodic(const RationalMap& map, int p, SpherePoint seed) {
    bool xin = home_inverted(seed);
    cplx x = chart_coord(seed, xin);
    for (int it = 0; it < 40; ++it) {
        cplx v = x, dv = 1.0;
        bool inv = xin;
        for (int k = 0; k < p; ++k) {
            cplx nv, nd;
            bool ninv;
            map.apply_chart(v, inv, nv, ninv, nd);
            dv *= nd;
            v = nv;
            inv = ninv;
        }
        if (inv != xin) {
            if (std::abs(v) < 1e-150) return std::nullopt;
            dv = -dv / (v * v);
            v = 1.0 / v;
        }
        cplx res = v - x;
        cplx dres = dv - 1.0;
        if (std::abs(dres) < 1e-300) return std::nullopt;
        cplx step = res / dres;
        double cap = 0.2 * (1.0 + std::abs(x));
        if (std::abs(step) > cap) step *= cap / std::abs(step);
        x -= step;
        if (!std::isfinite(std::abs(x))) return std::nullopt;
        if (std::abs(step) < 1e-14 * (1.0 + std::abs(x))) return from_chart(x, xin);
    }
    return std::nullopt;
}

}  // namespace

SpherePoint BottcherSystem::land_ray(InternalRay& ray, double land_tol) const {
    if (ray.radii.empty() || ray.radii.back() < 0.999)
        throw NotCertified("land_ray: ray not traced to r >= 0.999");
    int component_id = ray.component_id;

    // tail samples at radii 1 - 2^-k, seeded from the ray sample just below
    std::vector<SpherePoint> tail;
    size_t start = 1;
    for (size_t i = 1; i < ray.radii.size(); ++i)
        if (ray.radii[i] <= 0.98) start = i;
    SpherePoint seed = ray.polyline[start];
    double r_prev = ray.radii[start];
    int kmax = 24;
    for (int k = 6; k <= kmax; ++k) {
        double r = 1.0 - std::pow(2.0, -k);
        if (r <= r_prev) continue;
        SpherePoint p;
        try {
            p = radial_march(component_id, ray.angle, -std::log(r_prev), -std::log(r), seed, 0.01);
        } catch (const std::exception&) {
            break;
        }
        tail.push_back(p);
        seed = p;
        r_prev = r;
    }
    if (tail.size() < 5) throw NotCertified("land_ray: tail too short");

    bool inv = home_inverted(tail.back());
    std::vector<cplx> a;
    for (auto& p : tail) a.push_back(chart_coord(p, inv));
    // iterated Aitken extrapolation; the tail decays geometrically with a
    // Holder exponent set by the landing multiplier
    auto aitken = [](const std::vector<cplx>& v) {
        std::vector<cplx> o;
        for (size_t i = 0; i + 2 < v.size(); ++i) {
            cplx d1 = v[i + 1] - v[i], d2 = v[i + 2] - 2.0 * v[i + 1] + v[i];
            if (std::abs(d2) < 1e-300) o.push_back(v[i + 2]);
            else o.push_back(v[i] - d1 * d1 / d2);
        }
        return o;
    };
    std::vector<cplx> cur = a;
    cplx L = cur.back();
    double agree = std::numeric_limits<double>::infinity();
    for (int round = 0; round < 6 && cur.size() >= 3; ++round) {
        cur = aitken(cur);
        if (cur.size() >= 3) {
            double ag = std::max(std::abs(cur.back() - cur[cur.size() - 2]),
                                 std::abs(cur[cur.size() - 2] - cur[cur.size() - 3]));
            ag *= 2.0 / (1.0 + std::norm(cur.back()));  // to chordal scale
            if (ag < agree) {
                agree = ag;
                L = cur.back();
            }
        }
    }
    SpherePoint landing = from_chart(L, inv);

    // (pre)periodic landing points admit a Newton polish on f^p
    const RationalMap& f = atlas_->map;
    if (agree > 1e-12) {
        for (int p = 1; p <= 16; ++p) {
            if (chordal(f.iterate(landing, p), landing) > 0.05) continue;
            auto polished = newton_periodic(f, p, landing);
            if (!polished) continue;
            double d = chordal(*polished, landing);
            if (d > std::max(8.0 * agree, 3e-3)) continue;
            // tail consistency: the samples must genuinely close in on the
            // polished point, not merely drift toward its neighborhood
            double d1 = chordal(tail[tail.size() - 3], *polished);
            double d2 = chordal(tail[tail.size() - 2], *polished);
            double d3 = chordal(tail.back(), *polished);
            double d0 = chordal(tail.front(), *polished);
            if (d3 < d2 && d2 < d1 && d3 < 0.01 && d3 < 0.4 * d0) {
                landing = *polished;
                agree = std::max(chordal(f.iterate(landing, p), landing), 1e-14);
                break;
            }
        }
    }

    if (agree > land_tol) throw NotCertified("land_ray: tail did not stabilize");
    ray.landing_point = landing;
    ray.landing_certified = atlas_->grid.near_julia(landing, 2.0);
    return landing;
}

InternalRay BottcherSystem::traced_landed_ray(int component_id, double angle, double land_tol,
                                              double ray_step) const {
    InternalRay ray = trace_ray(component_id, angle, 0.9995, ray_step);
    land_ray(ray, land_tol);
    return ray;
}

std::vector<SpherePoint> BottcherSystem::equipotential(int component_id, double r,
                                                       int samples) const {
    if (r > 0.999) r = 0.999;
    const ComponentChart& ch = chart(component_id);
    if (!ch.usable) throw OutsideComponent("equipotential: no usable chart");
    std::vector<SpherePoint> out;
    SpherePoint z0 = inverse(component_id, cplx(r, 0));
    out.push_back(z0);
    SpherePoint prev = z0;
    for (int k = 1; k < samples; ++k) {
        double th = static_cast<double>(k) / samples;
        // subdivide the angular step when continuation jumps
        double from = static_cast<double>(k - 1) / samples;
        SpherePoint cur = prev;
        int depth = 0;
        std::vector<double> stack{th};
        double at = from;
        while (!stack.empty()) {
            double target = stack.back();
            try {
                SpherePoint nxt =
                    inverse_seeded(component_id, r * std::exp(cplx(0, 2 * M_PI * target)), cur);
                if (chordal(nxt, cur) > 0.1 && depth < 12) {
                    stack.push_back(0.5 * (at + target));
                    depth++;
                    continue;
                }
                cur = nxt;
                at = target;
                stack.pop_back();
            } catch (const std::exception&) {
                if (depth >= 12) throw BranchLost("equipotential: continuation failed");
                stack.push_back(0.5 * (at + target));
                depth++;
            }
        }
        out.push_back(cur);
        prev = cur;
    }
    out.push_back(z0);  // closed
    return out;
}

}  // namespace dynamo
