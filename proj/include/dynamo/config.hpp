#pragma once

#include <string>

namespace dynamo {

// Pipeline configuration; flags override file values, file overrides these.
struct RunConfig {
    std::string map = "power2";
    std::string map_file;
    int resolution = 1024;
    int max_iter = 300;
    double min_diameter = 1e-3;
    double eps_min = 1e-3;
    double edge_step = 2e-3;
    double ray_step = 2e-3;
    double lift_tol = 1e-10;
    double land_tol = 1e-7;
    double tube_radius = 0.05;
    int n = 2;       // pullback depth per step
    int n_max = 6;   // escalation ceiling on obstruction
    int k_max = 20;
    double tol = 1e-6;
    unsigned rng_seed = 0;
    int threads = 0;  // 0 = library default
    std::string out_dir = "out";

    void validate() const;
};

}  // namespace dynamo
