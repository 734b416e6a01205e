#include "dynamo/ratmap.hpp"

#include <algorithm>
#include <cmath>

namespace dynamo {

RationalMap::RationalMap(Poly num, Poly den) {
    num = trim(std::move(num));
    den = trim(std::move(den));
    int dn = degree(num), dd = degree(den);
    if (dn < 0 || dd < 0) throw std::invalid_argument("RationalMap: zero polynomial");
    d_ = std::max(dn, dd);
    if (d_ < 2) throw std::invalid_argument("RationalMap: degree must be >= 2");
    num.resize(static_cast<size_t>(d_) + 1, cplx(0, 0));
    den.resize(static_cast<size_t>(d_) + 1, cplx(0, 0));
    num_ = num;
    den_ = den;
    rnum_ = poly_reverse(num_);
    rden_ = poly_reverse(den_);

    // Shared roots would make the map degenerate.
    if (dd > 0) {
        for (cplx r : poly_roots(trim(den))) {
            if (std::abs(poly_eval(num, r)) < 1e-8 * (1.0 + std::abs(r)))
                throw std::invalid_argument("RationalMap: numerator and denominator share a root");
        }
    }

    // Dehomogenized Wronskian W(z,1) of the homogenizations: its roots are the
    // finite critical points; the degree drop below 2d-2 is the multiplicity
    // at infinity.
    Poly nd = poly_derive(num_);
    Poly dd_ = poly_derive(den_);
    Poly qv(static_cast<size_t>(d_) + 1, cplx(0, 0));
    Poly pv(static_cast<size_t>(d_) + 1, cplx(0, 0));
    for (int j = 0; j <= d_; ++j) {
        qv[j] = static_cast<double>(d_ - j) * den_[j];
        pv[j] = static_cast<double>(d_ - j) * num_[j];
    }
    wr_ = poly_sub(poly_mul(nd, qv), poly_mul(pv, dd_));
    wr_.resize(static_cast<size_t>(2 * d_ - 1), cplx(0, 0));
    rwr_ = poly_reverse(wr_);
}

SpherePoint RationalMap::evaluate(const SpherePoint& z) const {
    cplx u, v;
    if (z.inf) {
        u = 1.0;
        v = 0.0;
    } else if (std::abs(z.z) <= 1.0) {
        u = z.z;
        v = 1.0;
    } else {
        u = 1.0;
        v = 1.0 / z.z;
    }
    // P(u,v) = v^d N(u/v), evaluated as a polynomial in the small variable.
    cplx P, Q;
    if (v == cplx(1, 0)) {
        P = poly_eval(num_, u);
        Q = poly_eval(den_, u);
    } else {
        P = poly_eval(rnum_, v);
        Q = poly_eval(rden_, v);
    }
    double ap = std::abs(P), aq = std::abs(Q);
    if (ap <= aq * 1e-9 && aq == 0.0) return SpherePoint(0.0, 0.0);  // unreachable for valid maps
    if (aq == 0.0 || ap / std::max(aq, 1e-300) > kInfThreshold) return SpherePoint::infinity();
    return SpherePoint(P / Q);
}

SpherePoint RationalMap::iterate(SpherePoint z, int n) const {
    for (int i = 0; i < n; ++i) z = evaluate(z);
    return z;
}

double RationalMap::spherical_derivative(const SpherePoint& z) const {
    cplx u, v;
    bool invchart = home_inverted(z);
    if (invchart) {
        u = 1.0;
        v = z.inv_coord();
    } else {
        u = z.z;
        v = 1.0;
    }
    cplx P, Q, W;
    if (invchart) {
        P = poly_eval(rnum_, v);
        Q = poly_eval(rden_, v);
        W = poly_eval(rwr_, v);
    } else {
        P = poly_eval(num_, u);
        Q = poly_eval(den_, u);
        W = poly_eval(wr_, u);
    }
    double n2 = std::norm(u) + std::norm(v);
    double den = std::norm(P) + std::norm(Q);
    if (den == 0.0) return 0.0;
    return n2 * std::abs(W) / (static_cast<double>(d_) * den);
}

std::vector<std::pair<SpherePoint, int>> RationalMap::critical_points() const {
    Poly w = trim(wr_, 1e-12);
    int dw = degree(w);
    int mult_inf = 2 * d_ - 2 - dw;
    std::vector<cplx> roots;
    if (dw > 0) roots = poly_roots(w);
    auto clusters = clustered_roots(roots, 1e-8);
    std::vector<std::pair<SpherePoint, int>> out;
    for (auto& [pt, m] : clusters) {
        // Polish a multiplicity-m cluster on the (m-1)-th derivative, where
        // the root is simple.
        SpherePoint p = pt;
        if (!p.inf) {
            Poly g = w;
            for (int k = 1; k < m; ++k) g = poly_derive(g);
            cplx x = p.z;
            for (int it = 0; it < 20; ++it) {
                auto [gv, gd] = poly_eval_d(g, x);
                if (std::abs(gd) < 1e-300) break;
                cplx step = gv / gd;
                x -= step;
                if (std::abs(step) < 1e-14 * (1.0 + std::abs(x))) break;
            }
            p = SpherePoint(x);
        }
        out.emplace_back(p, m + 1);
    }
    if (mult_inf > 0) out.emplace_back(SpherePoint::infinity(), mult_inf + 1);
    int total = 0;
    for (auto& [p, dloc] : out) total += dloc - 1;
    if (total != 2 * d_ - 2) throw RootFindingFailed("critical_points: multiplicity bookkeeping failed");
    return out;
}

std::vector<std::pair<SpherePoint, int>> RationalMap::preimages(const SpherePoint& w) const {
    Poly p(static_cast<size_t>(d_) + 1, cplx(0, 0));
    if (w.inf) {
        p = den_;
    } else if (std::abs(w.z) <= 1.0) {
        p = poly_sub(num_, poly_scale(den_, w.z));
    } else {
        // Scale by 1/w to keep coefficients balanced: N/w - D.
        p = poly_sub(poly_scale(num_, 1.0 / w.z), den_);
    }
    p.resize(static_cast<size_t>(d_) + 1, cplx(0, 0));
    Poly pt = trim(p, 1e-13);
    int dp = degree(pt);
    int mult_inf = d_ - dp;
    std::vector<cplx> roots;
    if (dp > 0) roots = poly_roots(pt);
    auto clusters = clustered_roots(roots, 1e-8);
    std::vector<std::pair<SpherePoint, int>> out;
    for (auto& [pr, m] : clusters) {
        SpherePoint q = pr;
        if (!q.inf && m == 1) {
            // Newton polish against f itself.
            auto polished = newton_preimage(w, 1, q, 1e-13, 12);
            if (polished) q = *polished;
        } else if (!q.inf && m > 1) {
            // multiple root: polish on the derivative where it is simple
            Poly g = pt;
            for (int k = 1; k < m; ++k) g = poly_derive(g);
            cplx x = q.z;
            for (int it = 0; it < 24; ++it) {
                auto [gv, gd] = poly_eval_d(g, x);
                if (std::abs(gd) < 1e-300) break;
                cplx step = gv / gd;
                x -= step;
                if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
            }
            q = SpherePoint(x);
        }
        out.emplace_back(q, m);
    }
    if (mult_inf > 0) out.emplace_back(SpherePoint::infinity(), mult_inf);
    return out;
}

void RationalMap::apply_chart(cplx in, bool in_inverted, cplx& out, bool& out_inverted,
                              cplx& deriv) const {
    const Poly& A = in_inverted ? rnum_ : num_;
    const Poly& B = in_inverted ? rden_ : den_;
    auto [av, ad] = poly_eval_d(A, in);
    auto [bv, bd] = poly_eval_d(B, in);
    // plain output: A/B, derivative (A'B - AB')/B^2
    double am = std::abs(av), bm = std::abs(bv);
    cplx wnum = ad * bv - av * bd;
    if (am <= bm) {
        out = av / bv;
        out_inverted = false;
        deriv = wnum / (bv * bv);
    } else {
        out = bv / av;
        out_inverted = true;
        deriv = -wnum / (av * av);
    }
}

std::optional<SpherePoint> RationalMap::newton_preimage(const SpherePoint& target, int m,
                                                        const SpherePoint& seed, double tol,
                                                        int max_iter) const {
    bool xin = home_inverted(seed);
    bool tin = home_inverted(target);
    cplx x = chart_coord(seed, xin);
    cplx tcoord = chart_coord(target, tin);
    for (int it = 0; it < max_iter; ++it) {
        cplx v = x, dv = 1.0;
        bool inv = xin;
        for (int k = 0; k < m; ++k) {
            cplx nv, nd;
            bool ninv;
            apply_chart(v, inv, nv, ninv, nd);
            dv *= nd;
            v = nv;
            inv = ninv;
        }
        // convert to target chart
        if (inv != tin) {
            if (std::abs(v) < 1e-300) return std::nullopt;
            dv = -dv / (v * v);
            v = 1.0 / v;
        }
        cplx res = v - tcoord;
        if (std::abs(res) < tol) return from_chart(x, xin);
        if (std::abs(dv) < 1e-300) return std::nullopt;
        cplx step = res / dv;
        double cap = 0.5 * (1.0 + std::abs(x));
        if (std::abs(step) > cap) step *= cap / std::abs(step);
        x -= step;
        // convergence in the source: the target residual saturates at
        // machine-eps times the orbit derivative on deep digs
        if (std::abs(step) < tol * (1.0 + std::abs(x))) return from_chart(x, xin);
        if (!std::isfinite(std::abs(x))) return std::nullopt;
        if (std::abs(x) > 3.0) {  // wandered out of this chart's sweet zone
            SpherePoint sp = from_chart(x, xin);
            bool nin = home_inverted(sp);
            if (nin != xin) {
                x = chart_coord(sp, nin);
                xin = nin;
            }
        }
    }
    return std::nullopt;
}

LocalSeries RationalMap::local_series(const SpherePoint& center, int K,
                                      std::optional<bool> force_out_inverted) const {
    LocalSeries ls;
    ls.in_inverted = home_inverted(center);
    cplx c0 = chart_coord(center, ls.in_inverted);
    Poly A = ls.in_inverted ? rnum_ : num_;
    Poly B = ls.in_inverted ? rden_ : den_;
    A = poly_shift(A, c0);
    B = poly_shift(B, c0);
    SpherePoint image = evaluate(center);
    ls.out_inverted = force_out_inverted.value_or(home_inverted(image));
    if (ls.out_inverted) std::swap(A, B);
    A.resize(std::max<size_t>(A.size(), static_cast<size_t>(K)), cplx(0, 0));
    B.resize(std::max<size_t>(B.size(), static_cast<size_t>(K)), cplx(0, 0));
    ls.s = series_div(A, B, K);
    return ls;
}

std::vector<std::vector<SpherePoint>> PostcriticalData::superattracting_cycles() const {
    std::vector<std::vector<SpherePoint>> cycles;
    auto seen = [&](const SpherePoint& p) {
        for (auto& cyc : cycles)
            for (auto& q : cyc)
                if (chordal(p, q) < 1e-7) return true;
        return false;
    };
    for (const auto& rec : orbit_table) {
        if (rec.period <= 0) continue;
        std::vector<SpherePoint> cyc(rec.orbit.begin() + rec.preperiod,
                                     rec.orbit.begin() + rec.preperiod + rec.period);
        bool super = false;
        for (auto& q : cyc)
            for (auto& [cp, dl] : critical_points)
                if (chordal(q, cp) < 1e-7) super = true;
        if (super && !cyc.empty() && !seen(cyc.front())) cycles.push_back(cyc);
    }
    return cycles;
}

bool PostcriticalData::in_postcritical(const SpherePoint& p, double tol) const {
    for (auto& q : postcritical_set)
        if (chordal(p, q) < tol) return true;
    return false;
}

PostcriticalData postcritical_orbit(const RationalMap& map, double tol, int max_depth) {
    if (!(tol > 0.0) || tol > 1e-4) throw std::invalid_argument("postcritical_orbit: bad tol");
    PostcriticalData out;
    out.critical_points = map.critical_points();

    auto push_unique = [&](std::vector<SpherePoint>& set, const SpherePoint& p) {
        for (auto& q : set)
            if (chordal(p, q) < tol) return;
        set.push_back(p);
    };

    for (auto& [c, dloc] : out.critical_points) {
        OrbitRecord rec;
        rec.critical_value = map.evaluate(c);
        std::vector<SpherePoint> orbit{rec.critical_value};
        int preperiod = -1, period = 0;
        for (int step = 0; step < max_depth; ++step) {
            SpherePoint next = map.evaluate(orbit.back());
            bool closed = false;
            for (size_t j = 0; j < orbit.size(); ++j) {
                if (chordal(next, orbit[j]) < tol) {
                    preperiod = static_cast<int>(j);
                    period = static_cast<int>(orbit.size()) - preperiod;
                    closed = true;
                    break;
                }
            }
            if (closed) break;
            orbit.push_back(next);
        }
        if (preperiod < 0)
            throw NotPCF("orbit of a critical value failed to close within max_depth");
        rec.orbit = orbit;
        rec.preperiod = preperiod;
        rec.period = period;

        // Newton polish of the cycle representative, then regenerate the tail.
        SpherePoint rep = orbit[static_cast<size_t>(preperiod)];
        auto polished = map.newton_preimage(rep, period, rep, 1e-13, 30);
        if (polished && chordal(*polished, rep) < 10 * tol) {
            SpherePoint p = *polished;
            for (int k = 0; k < period; ++k) {
                rec.orbit[static_cast<size_t>(preperiod + k)] = p;
                p = map.evaluate(p);
            }
        }
        out.orbit_table.push_back(rec);
    }

    for (auto& rec : out.orbit_table)
        for (auto& p : rec.orbit) push_unique(out.postcritical_set, p);

    // Closure sanity: f(Post) inside Post up to tolerance.
    for (auto& p : out.postcritical_set) {
        SpherePoint ip = map.evaluate(p);
        bool ok = false;
        for (auto& q : out.postcritical_set)
            if (chordal(ip, q) < 100 * tol) ok = true;
        if (!ok) throw NotPCF("postcritical set not forward invariant at tolerance");
    }
    out.marked_set_P = out.postcritical_set;
    return out;
}

cplx refine_cycle_parameter(const std::string& family, cplx guess, int period) {
    if (family != "quadratic") throw std::invalid_argument("refine_cycle_parameter: unknown family");
    if (std::abs(guess) >= 4.0) throw std::invalid_argument("refine_cycle_parameter: |guess| < 4 required");
    cplx c = guess;
    for (int it = 0; it < 80; ++it) {
        cplx z(0, 0), dz(0, 0);
        for (int k = 0; k < period; ++k) {
            dz = 2.0 * z * dz + 1.0;
            z = z * z + c;
        }
        if (std::abs(z) < 1e-12) return c;
        if (std::abs(dz) < 1e-300) break;
        cplx step = z / dz;
        if (std::abs(step) > 0.5) step *= 0.5 / std::abs(step);
        c -= step;
        if (std::abs(c) > 8.0) break;
    }
    // final residual check
    cplx z(0, 0);
    for (int k = 0; k < period; ++k) z = z * z + c;
    if (std::abs(z) < 1e-12) return c;
    throw NoConvergence("refine_cycle_parameter: Newton did not converge");
}

}  // namespace dynamo
