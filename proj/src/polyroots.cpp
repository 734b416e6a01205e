#include "dynamo/polyroots.hpp"

#include <algorithm>
#include <cmath>

namespace dynamo {

std::vector<cplx> poly_roots(const Poly& p_in, double tol, int max_iter) {
    Poly p = trim(p_in);
    int n = degree(p);
    if (n < 0) throw RootFindingFailed("poly_roots: zero polynomial");
    if (n == 0) return {};
    if (n == 1) return {-p[0] / p[1]};

    // Initial guesses on a slightly perturbed circle sized by the Cauchy bound.
    double r = 0.0;
    for (int i = 0; i < n; ++i) r = std::max(r, std::abs(p[i] / p[n]));
    r = 1.0 + r;
    r = std::min(r, 1e6);
    std::vector<cplx> z(n);
    const double golden = 0.61803398874989484820;
    for (int i = 0; i < n; ++i) {
        double ang = 2.0 * M_PI * (static_cast<double>(i) / n + golden * i / (n + 1.0)) + 0.3;
        z[i] = 0.5 * r * std::exp(cplx(0, ang)) + cplx(0.01, 0.013) * static_cast<double>(i);
    }

    Poly dp = poly_derive(p);
    for (int iter = 0; iter < max_iter; ++iter) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            auto [pv, dpv] = poly_eval_d(p, z[i]);
            if (pv == cplx(0, 0)) continue;
            cplx ratio;
            if (dpv != cplx(0, 0)) {
                ratio = pv / dpv;
            } else {
                ratio = pv;  // fallback nudge
            }
            cplx sum(0, 0);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                cplx d = z[i] - z[j];
                if (std::abs(d) < 1e-300) d = cplx(1e-300, 0);
                sum += 1.0 / d;
            }
            cplx denom = 1.0 - ratio * sum;
            cplx step = std::abs(denom) > 1e-300 ? ratio / denom : ratio;
            // Trust cap keeps stray iterates from flying off.
            double cap = 0.5 * (1.0 + std::abs(z[i]));
            double sl = std::abs(step);
            if (sl > cap) step *= cap / sl;
            z[i] -= step;
            worst = std::max(worst, std::abs(step) / (1.0 + std::abs(z[i])));
        }
        if (worst < tol) return z;
    }
    // Accept if residuals are already tiny relative to coefficient scale.
    double scale = 0.0;
    for (auto& c : p) scale = std::max(scale, std::abs(c));
    for (int i = 0; i < n; ++i) {
        double res = std::abs(poly_eval(p, z[i]));
        double zb = std::max(1.0, std::pow(std::abs(z[i]), n));
        if (res > 1e-8 * scale * zb) throw RootFindingFailed("poly_roots: no convergence");
    }
    return z;
}

std::vector<std::pair<SpherePoint, int>> clustered_roots(const std::vector<cplx>& roots,
                                                         double merge_radius) {
    std::vector<std::pair<SpherePoint, int>> out;
    std::vector<bool> used(roots.size(), false);
    for (size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        SpherePoint pi(roots[i]);
        std::vector<size_t> members{i};
        for (size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            if (chordal(pi, SpherePoint(roots[j])) < merge_radius) {
                members.push_back(j);
                used[j] = true;
            }
        }
        cplx mean(0, 0);
        for (auto m : members) mean += roots[m];
        mean /= static_cast<double>(members.size());
        out.emplace_back(SpherePoint(mean), static_cast<int>(members.size()));
    }
    return out;
}

}  // namespace dynamo
