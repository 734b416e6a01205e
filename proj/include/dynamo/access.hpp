#pragma once

#include "dynamo/bottcher.hpp"

namespace dynamo {

struct Unresolvable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AccessRay {
    int component_id = -1;
    double angle = 0.0;
    SpherePoint approach;  // a ray sample close to the landing point
};

struct AccessRecord {
    SpherePoint z;
    std::vector<int> dom;
    std::vector<AccessRay> acc;
    bool semi_buried = false;
    std::string type_tag;  // 1a 1b 2a 2b 3 4a 4b buried unresolvable
};

// Dom(z) and Acc(z) by ray-fan landing with angle refinement, classified per
// the accessible-point taxonomy. z must lie near the Julia raster.
AccessRecord acc_estimate(const FatouAtlas& atlas, const BottcherSystem& bott,
                          const SpherePoint& z, int angle_budget = 64, double land_tol = 1e-7);

// Raster points adjacent to three distinct components, clustered; key is the
// sorted component triple.
struct TripleCluster {
    std::array<int, 3> triple;
    std::vector<SpherePoint> centers;
};
std::vector<TripleCluster> triple_boundary_clusters(const FatouAtlas& atlas);

}  // namespace dynamo
