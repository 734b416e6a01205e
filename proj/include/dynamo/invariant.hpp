#pragma once

#include "dynamo/pullback.hpp"

namespace dynamo {

struct LiftObstructed : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateRun : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RateFit {
    double C = 0.0;
    double lambda_est = 1.0;  // per single application of f
    double r_squared = 0.0;
};

struct PullbackRun {
    int n = 1;
    std::vector<PlanarGraph> graphs;      // G_0 ... G_K
    std::vector<double> step_distances;   // hausdorff(G_k, G_{k+1})
    std::vector<double> residuals;        // dist(f^n G_k, G_{k-1}) for k >= 1
    bool converged = false;
    double final_residual = 0.0;
};

double hausdorff(const std::vector<std::vector<SpherePoint>>& A,
                 const std::vector<std::vector<SpherePoint>>& B);
double hausdorff(const PlanarGraph& A, const PlanarGraph& B);

// sup over samples p of G of dist(f^n(p), G)
double invariance_residual(const RationalMap& map, const PlanarGraph& G, int n);
// sup over samples p of G of dist(f^n(p), H)
double forward_residual(const RationalMap& map, const PlanarGraph& G, int n,
                        const PlanarGraph& H);

// Pullback + isotopic-selection iteration with the stop rule
// (step < tol and invariance residual < 10 tol), n-escalation on obstruction.
PullbackRun iterate_pullback(const RationalMap& map, const PostcriticalData& pcf,
                             const PlanarGraph& G0, int n, int k_max, double tol,
                             double tube_radius, double lift_tol = 1e-10, int n_max = 6);

RateFit rate_fit(const PullbackRun& run);

}  // namespace dynamo
