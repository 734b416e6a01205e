#pragma once

#include "dynamo/ratmap.hpp"

namespace dynamo {

struct UnknownEntry : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FixtureExpectations {
    int postcritical_size = 0;
    int min_components = 1;        // at default resolution and cutoff
    int invariance_n = 1;          // residual check depth for the exact edges
    double invariance_bound = 0.0; // 0 = graph is deliberately off-invariant
    bool converges_k1 = false;
    int faces_level0 = 0;  // 0 = not pinned
    std::vector<std::pair<SpherePoint, std::string>> point_types;
};

struct CatalogEntry {
    std::string name;
    Poly num, den;
    std::string graph_recipe;   // catalog hint for build_initial_graph
    std::string notes;
    cplx seed_parameter{0, 0};  // pre-refinement parameter, when applicable
    cplx refined_parameter{0, 0};
    FixtureExpectations fixtures;

    RationalMap map() const { return RationalMap(num, den); }
};

std::vector<std::string> catalog_names();
CatalogEntry catalog_load(const std::string& name);

}  // namespace dynamo
