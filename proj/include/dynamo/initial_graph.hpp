#pragma once

#include "dynamo/checks.hpp"

namespace dynamo {

struct PostconditionFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Catalog-assisted construction of an initial graph containing the marked
// set, machine-checked against the output contract: periodic Fatou centers
// non-cut, branch vertices outside P triaccessible, marked rays present,
// buried marked points are endpoints.
PlanarGraph build_initial_graph(const GraphContext& ctx, const PostcriticalData& pcf,
                                const std::string& catalog_hint, bool check_postconditions = true);

// Contract check used by build_initial_graph and the standalone verifier.
CheckReport check_graph_contract(const GraphContext& ctx, const PlanarGraph& G);

}  // namespace dynamo
