#pragma once

#include <stdexcept>
#include <vector>

#include "dynamo/poly.hpp"

namespace dynamo {

struct RootFindingFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All complex roots of p (no deflation), via Aberth-Ehrlich simultaneous
// iteration. Throws RootFindingFailed if the iteration stalls.
std::vector<cplx> poly_roots(const Poly& p, double tol = 1e-13, int max_iter = 200);

// Roots clustered into (representative, multiplicity) pairs; two roots merge
// when their chordal distance is below merge_radius.
std::vector<std::pair<SpherePoint, int>> clustered_roots(const std::vector<cplx>& roots,
                                                         double merge_radius = 1e-8);

}  // namespace dynamo
