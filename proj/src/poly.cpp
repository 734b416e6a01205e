#include "dynamo/poly.hpp"

#include <cassert>
#include <stdexcept>

namespace dynamo {

int degree(const Poly& p, double tol) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (std::abs(p[i]) > tol) return i;
    return -1;
}

Poly trim(Poly p, double tol) {
    double scale = 0.0;
    for (auto& c : p) scale = std::max(scale, std::abs(c));
    int d = degree(p, tol * scale);
    p.resize(static_cast<size_t>(d + 1));
    return p;
}

cplx poly_eval(const Poly& p, cplx z) {
    cplx r(0, 0);
    for (size_t i = p.size(); i-- > 0;) r = r * z + p[i];
    return r;
}

std::pair<cplx, cplx> poly_eval_d(const Poly& p, cplx z) {
    cplx r(0, 0), dr(0, 0);
    for (size_t i = p.size(); i-- > 0;) {
        dr = dr * z + r;
        r = r * z + p[i];
    }
    return {r, dr};
}

Poly poly_derive(const Poly& p) {
    if (p.size() <= 1) return {cplx(0, 0)};
    Poly d(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) d[i - 1] = static_cast<double>(i) * p[i];
    return d;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, cplx(0, 0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), cplx(0, 0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

Poly poly_sub(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), cplx(0, 0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return r;
}

Poly poly_scale(const Poly& a, cplx s) {
    Poly r = a;
    for (auto& c : r) c *= s;
    return r;
}

Poly poly_shift(const Poly& p, cplx c) {
    // Horner-style synthetic shift.
    Poly r = p;
    int n = static_cast<int>(p.size());
    for (int i = 0; i < n; ++i)
        for (int j = n - 2; j >= i; --j) r[j] += c * r[j + 1];
    return r;
}

Poly poly_reverse(const Poly& p) {
    Poly r(p.rbegin(), p.rend());
    return r;
}

Poly series_mul(const Poly& a, const Poly& b, int K) {
    Poly r(K, cplx(0, 0));
    for (int i = 0; i < K && i < static_cast<int>(a.size()); ++i) {
        if (a[i] == cplx(0, 0)) continue;
        for (int j = 0; j + i < K && j < static_cast<int>(b.size()); ++j)
            r[i + j] += a[i] * b[j];
    }
    return r;
}

Poly series_pow(const Poly& a, int e, int K) {
    Poly r(K, cplx(0, 0));
    r[0] = 1.0;
    Poly base = a;
    base.resize(K, cplx(0, 0));
    while (e > 0) {
        if (e & 1) r = series_mul(r, base, K);
        base = series_mul(base, base, K);
        e >>= 1;
    }
    return r;
}

Poly series_inv(const Poly& a, int K) {
    if (a.empty() || a[0] == cplx(0, 0)) throw std::runtime_error("series_inv: zero constant term");
    Poly r(K, cplx(0, 0));
    r[0] = 1.0 / a[0];
    for (int n = 1; n < K; ++n) {
        cplx acc(0, 0);
        for (int k = 1; k <= n && k < static_cast<int>(a.size()); ++k) acc += a[k] * r[n - k];
        r[n] = -acc / a[0];
    }
    return r;
}

Poly series_div(const Poly& a, const Poly& b, int K) { return series_mul(a, series_inv(b, K), K); }

Poly series_compose(const Poly& a, const Poly& b, int K) {
    if (!b.empty() && b[0] != cplx(0, 0))
        throw std::runtime_error("series_compose: inner constant term must vanish");
    // Horner in the series ring.
    Poly r(K, cplx(0, 0));
    for (int i = std::min<int>(K, static_cast<int>(a.size())) - 1; i >= 0; --i) {
        r = series_mul(r, b, K);
        r[0] += a[i];
    }
    return r;
}

static Poly series_log1p(const Poly& h, int K) {
    // log(1 + h) for h with h[0] = 0.
    Poly r(K, cplx(0, 0));
    Poly hp(K, cplx(0, 0));
    hp[0] = 1.0;
    for (int n = 1; n < K; ++n) {
        hp = series_mul(hp, h, K);
        double sign = (n % 2 == 1) ? 1.0 : -1.0;
        for (int i = 0; i < K; ++i) r[i] += sign / static_cast<double>(n) * hp[i];
    }
    return r;
}

static Poly series_exp0(const Poly& a, int K) {
    // exp(a) for a with a[0] = 0.
    Poly r(K, cplx(0, 0));
    r[0] = 1.0;
    Poly term(K, cplx(0, 0));
    term[0] = 1.0;
    for (int n = 1; n < K; ++n) {
        term = series_mul(term, a, K);
        for (int i = 0; i < K; ++i) term[i] /= static_cast<double>(n);
        for (int i = 0; i < K; ++i) r[i] += term[i];
    }
    return r;
}

Poly series_root(const Poly& a, int d, int K) {
    // a = a_d t^d (1 + h(t)); requires the first d coefficients ~ 0.
    if (static_cast<int>(a.size()) <= d || a[d] == cplx(0, 0))
        throw std::runtime_error("series_root: order mismatch");
    Poly h(K, cplx(0, 0));
    for (int i = 0; i + d < static_cast<int>(a.size()) && i < K; ++i) h[i] = a[i + d] / a[d];
    h[0] = 0.0;
    Poly lg = series_log1p(h, K);
    for (auto& c : lg) c /= static_cast<double>(d);
    Poly body = series_exp0(lg, K);  // (1+h)^{1/d}
    cplx lead = std::pow(a[d], 1.0 / static_cast<double>(d));
    Poly r(K, cplx(0, 0));
    for (int i = 0; i + 1 < K; ++i) r[i + 1] = lead * body[i];
    return r;
}

Poly series_revert(const Poly& s, int K) {
    if (s.size() < 2 || s[0] != cplx(0, 0) || s[1] == cplx(0, 0))
        throw std::runtime_error("series_revert: need s = s1 t + ... with s1 != 0");
    // Newton iteration on r -> r - (s(r) - t)/s'(r), doubling precision.
    Poly r(K, cplx(0, 0));
    if (K > 1) r[1] = 1.0 / s[1];
    Poly sd = poly_derive(s);
    int prec = 2;
    while (prec < 2 * K) {
        int Kc = std::min(K, prec);
        Poly sr = series_compose(s, r, Kc);
        sr[0] = 0.0;
        if (Kc > 1) sr[1] -= 1.0;  // s(r) - t
        Poly sdr = series_compose(sd, r, Kc);
        Poly corr = series_div(sr, sdr, Kc);
        for (int i = 0; i < Kc; ++i) r[i] -= corr[i];
        prec *= 2;
    }
    return r;
}

Poly series_decompose(const Poly& S, const Poly& C, int d, int K) {
    if (static_cast<int>(C.size()) <= d || C[d] == cplx(0, 0))
        throw std::runtime_error("series_decompose: inner order mismatch");
    int m = K / d + 1;  // coefficients of Q we can determine
    Poly Q(m, cplx(0, 0));
    Poly Ck(K, cplx(0, 0));
    Ck[0] = 1.0;
    Poly acc(K, cplx(0, 0));  // running sum of q_j C^j
    for (int k = 1; k < m; ++k) {
        Ck = series_mul(Ck, C, K);
        int n = k * d;
        if (n >= K) break;
        cplx lead = Ck[n];
        cplx target = (n < static_cast<int>(S.size()) ? S[n] : cplx(0, 0)) - acc[n];
        Q[k] = target / lead;
        for (int i = 0; i < K; ++i) acc[i] += Q[k] * Ck[i];
    }
    return Q;
}

}  // namespace dynamo
