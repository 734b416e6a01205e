#pragma once

#include <json.hpp>

#include "dynamo/catalog.hpp"
#include "dynamo/graph.hpp"
#include "dynamo/invariant.hpp"

namespace dynamo {

using json = nlohmann::json;

json point_to_json(const SpherePoint& p);
SpherePoint point_from_json(const json& j);

json graph_to_json(const PlanarGraph& G);
PlanarGraph graph_from_json(const json& j);

json atlas_to_json(const FatouAtlas& atlas);

json map_spec_to_json(const RationalMap& map);
RationalMap map_spec_from_json(const json& j);

json run_report_to_json(const PullbackRun& run, const RateFit* fit, const json& config_echo);
std::string run_step_csv(const PullbackRun& run);

json pullback_to_json(const PullbackGraph& H);

}  // namespace dynamo
