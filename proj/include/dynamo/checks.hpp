#pragma once

#include "dynamo/access.hpp"
#include "dynamo/graph.hpp"

namespace dynamo {

struct AccessUnresolved : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct LandingFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SweepBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Obstruction test at an accessible point z of the arc: an adjacent ray pair
// from distinct components is an obstruction when the arc crosses the ray
// union at z, or terminally approaches z through that entrance. Rays already
// carried by `host` (when given) are part of the local configuration and are
// never crossed.
CheckReport check_obstruction(const GraphContext& ctx, const Edge& arc, const SpherePoint& z,
                              const PlanarGraph* host = nullptr);

// Linking condition at every Julia vertex: buried vertices are endpoints and
// no special entrance carries two edge germs.
CheckReport check_linking(const GraphContext& ctx, const PlanarGraph& G);

// First-in/Last-out: replaces every >=2-point meeting with a materialized
// component closure by the two internal rays landing at the entry/exit.
Edge first_last(const GraphContext& ctx, const Edge& arc, double eps_min);

// Jitter + First-Last + dusty-point sweep; output passes the obstruction
// check at its ray junctions and stays near the input's Julia trace.
Edge clean_arc(const GraphContext& ctx, const Edge& arc, double eps);

CheckReport check_F_disconnected(const GraphContext& ctx, const PlanarGraph& G);

struct AdmissibilityReport {
    CheckReport regulated;       // A1
    CheckReport vertices_to_P;   // A2
    CheckReport centers_noncut;  // A3
    CheckReport rays_present;    // A4
    bool pass() const {
        return regulated.pass && vertices_to_P.pass && centers_noncut.pass && rays_present.pass;
    }
};
AdmissibilityReport check_admissible(const GraphContext& ctx, const PostcriticalData& pcf,
                                     const PlanarGraph& G, int n_pullback_depth);

// Classification of the meeting between an arc and one component closure.
enum class MeetKind { Empty, OnePoint, TwoRays, TwoPointsExceptional, Other };
struct MeetReport {
    MeetKind kind = MeetKind::Empty;
    int companion_id = -1;  // smaller component carrying the ray pair (exceptional case)
};
MeetReport classify_meeting(const GraphContext& ctx, const Edge& arc, int component_id);

}  // namespace dynamo
