#pragma once

#include <map>
#include <functional>
#include <optional>

#include "dynamo/grid.hpp"

namespace dynamo {

struct CenterNotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FatouComponent {
    int id = -1;
    SpherePoint center;
    int preperiod = 0;  // 0 = periodic
    int period = 0;     // component cycle length (periodic components)
    int image_id = -1;
    int degree_on_component = 1;  // delta_U = deg(f|_U)
    double diameter = 0.0;
    int cycle_label = JULIA;  // basin cycle this component belongs to
    bool is_periodic() const { return preperiod == 0; }
};

// Raster complement region of a component's closure: the stand-in for a
// component Omega of int(K_U). Only regions containing Fatou pixels of some
// other materialized component count.
struct ComplementRegion {
    int region_id = -1;
    double diameter = 0.0;
    bool has_fatou = false;
    std::vector<int> touching_components;
};

struct ComplementDecomposition {
    std::vector<int> region_of[2];  // per pixel, region id or -1 (pixels of U itself)
    std::vector<ComplementRegion> regions;
};

class FatouAtlas {
  public:
    RationalMap map;
    PostcriticalData pcf;
    BasinGrid grid;
    double min_diameter = 1e-3;
    std::vector<FatouComponent> components;
    std::vector<int> comp_of[2];  // per pixel: materialized component id or -1

    FatouAtlas(RationalMap m, PostcriticalData p) : map(std::move(m)), pcf(std::move(p)) {}

    const FatouComponent& component(int id) const { return components[static_cast<size_t>(id)]; }

    // Component id at the point's home pixel (-1 = none).
    int component_at(const SpherePoint& p) const;
    // As above, but probes a small neighborhood when the exact pixel misses.
    int component_near(const SpherePoint& p, int radius_px = 2) const;

    // Component ids whose pixels meet the chordal disk around p.
    std::vector<int> components_touching(const SpherePoint& p, double radius) const;

    // Chordal distance from p to the nearest pixel not in component `id`
    // (search truncated at `cap`).
    double depth_inside(const SpherePoint& p, int id, double cap) const;

    const ComplementDecomposition& complement_of(int component_id) const;

    std::vector<SpherePoint> julia_sample(size_t max_points, unsigned seed) const;

  private:
    mutable std::map<int, ComplementDecomposition> complement_cache_;
};

// Builds the component atlas from a labeled grid. Components with spherical
// diameter below min_diameter are left unmaterialized.
FatouAtlas component_atlas(const RationalMap& map, const PostcriticalData& pcf, BasinGrid grid,
                           double min_diameter);

// Connected classes of same-value pixels across both charts (INT_MIN skips a
// pixel); returns per-class pixel counts and fills `out` with class ids.
std::vector<int> sphere_regions(const BasinGrid& g,
                                const std::function<int(int, int, int)>& value,
                                std::vector<int> out[2]);

}  // namespace dynamo
