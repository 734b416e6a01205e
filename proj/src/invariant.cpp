#include "dynamo/invariant.hpp"

#include <cmath>

namespace dynamo {

double hausdorff(const std::vector<std::vector<SpherePoint>>& A,
                 const std::vector<std::vector<SpherePoint>>& B) {
    return hausdorff_polylines(A, B);
}

double hausdorff(const PlanarGraph& A, const PlanarGraph& B) {
    return hausdorff_polylines(A.polylines(), B.polylines());
}

double invariance_residual(const RationalMap& map, const PlanarGraph& G, int n) {
    return forward_residual(map, G, n, G);
}

double forward_residual(const RationalMap& map, const PlanarGraph& G, int n,
                        const PlanarGraph& H) {
    SegmentIndex index(H.polylines());
    double worst = 0.0;
    for (const auto& e : G.edges) {
        for (const auto& p : e.polyline) {
            worst = std::max(worst, index.distance(map.iterate(p, n)));
        }
    }
    return worst;
}

PullbackRun iterate_pullback(const RationalMap& map, const PostcriticalData& pcf,
                             const PlanarGraph& G0, int n_in, int k_max, double tol,
                             double tube_radius, double lift_tol, int n_max) {
    for (int n = n_in; n <= n_max; ++n) {
        PullbackRun run;
        run.n = n;
        run.graphs.push_back(G0);
        try {
            for (int k = 0; k < k_max; ++k) {
                const PlanarGraph& Gk = run.graphs.back();
                PullbackGraph H = pullback_graph(map, pcf, Gk, n, lift_tol);
                PlanarGraph Gn = select_isotopic(Gk, H, tube_radius);
                double step = hausdorff(Gk, Gn);
                run.step_distances.push_back(step);
                run.residuals.push_back(forward_residual(map, Gn, n, Gk));
                run.graphs.push_back(Gn);
                if (step < tol) {
                    double res = invariance_residual(map, Gn, n);
                    if (res < 10.0 * tol) {
                        run.converged = true;
                        run.final_residual = res;
                        return run;
                    }
                }
            }
        } catch (const NoLiftInTube& e) {
            if (n < n_max) continue;  // escalate the pullback depth
            throw LiftObstructed(e.what());
        }
        if (!run.converged) throw NoConvergence("iterate_pullback: k_max reached");
    }
    throw LiftObstructed("iterate_pullback: obstructed at every depth");
}

RateFit rate_fit(const PullbackRun& run) {
    // discard burn-in (k < 2), require four usable steps
    std::vector<std::pair<double, double>> pts;  // (k, log step)
    for (size_t k = 2; k < run.step_distances.size(); ++k) {
        double d = run.step_distances[k];
        if (d <= 1e-14) break;
        pts.push_back({static_cast<double>(k), std::log(d)});
    }
    if (pts.size() < 4) throw DegenerateRun("rate_fit: fewer than four nonzero steps after burn-in");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    double m = static_cast<double>(pts.size());
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double inter = (sy - slope * sx) / m;
    double ybar = sy / m;
    double ss_tot = 0, ss_res = 0;
    for (auto& [x, y] : pts) {
        double f = inter + slope * x;
        ss_tot += (y - ybar) * (y - ybar);
        ss_res += (y - f) * (y - f);
    }
    RateFit fit;
    fit.C = std::exp(inter);
    fit.lambda_est = std::exp(-slope / run.n);
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

}  // namespace dynamo
