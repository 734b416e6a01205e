#include "dynamo/catalog.hpp"

namespace dynamo {

std::vector<std::string> catalog_names() {
    return {"power2", "power3", "basilica", "chebyshev", "airplane", "newton-cubic"};
}

CatalogEntry catalog_load(const std::string& name) {
    CatalogEntry e;
    e.name = name;
    if (name == "power2") {
        e.num = {{0, 0}, {0, 0}, {1, 0}};
        e.den = {{1, 0}};
        e.graph_recipe = "power";
        e.notes = "z^2; Julia set is the unit circle";
        e.fixtures.postcritical_size = 2;
        e.fixtures.min_components = 2;
        e.fixtures.invariance_bound = 1e-8;
        e.fixtures.converges_k1 = true;
        e.fixtures.faces_level0 = 2;
        e.fixtures.point_types = {{SpherePoint(1, 0), "2a"}};
    } else if (name == "power3") {
        e.num = {{0, 0}, {0, 0}, {0, 0}, {1, 0}};
        e.den = {{1, 0}};
        e.graph_recipe = "power";
        e.notes = "z^3";
        e.fixtures.postcritical_size = 2;
        e.fixtures.min_components = 2;
        e.fixtures.invariance_bound = 1e-8;
        e.fixtures.converges_k1 = true;
    } else if (name == "basilica") {
        e.num = {{-1, 0}, {0, 0}, {1, 0}};
        e.den = {{1, 0}};
        e.graph_recipe = "basilica";
        e.notes = "z^2 - 1; superattracting 2-cycle {0, -1}";
        e.seed_parameter = {-1.0, 0.0};
        e.refined_parameter = {-1.0, 0.0};
        e.fixtures.postcritical_size = 3;
        e.fixtures.min_components = 3;
        e.fixtures.invariance_bound = 0.0;  // chain edge is seeded off-invariant
    } else if (name == "chebyshev") {
        e.num = {{-2, 0}, {0, 0}, {1, 0}};
        e.den = {{1, 0}};
        e.graph_recipe = "chebyshev";
        e.notes = "z^2 - 2; Julia set is [-2, 2]";
        e.fixtures.postcritical_size = 3;
        e.fixtures.min_components = 1;
        e.fixtures.invariance_bound = 1e-6;
        e.fixtures.converges_k1 = true;
        e.fixtures.faces_level0 = 1;
        e.fixtures.point_types = {{SpherePoint(2, 0), "1b"}, {SpherePoint(0, 0), "4b"}};
    } else if (name == "airplane") {
        // the caption-style parameter is a rounded guess; the pipeline refines
        // it onto the superattracting period-3 parameter
        e.seed_parameter = {-1.75875, 0.0};
        e.refined_parameter = refine_cycle_parameter("quadratic", e.seed_parameter, 3);
        e.num = {e.refined_parameter, {0, 0}, {1, 0}};
        e.den = {{1, 0}};
        e.graph_recipe = "airplane";
        e.notes = "z^2 + c with a real superattracting 3-cycle";
        e.fixtures.postcritical_size = 4;
        e.fixtures.min_components = 3;
        e.fixtures.invariance_bound = 0.0;
    } else if (name == "newton-cubic") {
        // Newton's method for z^3 - 1: (2z^3 + 1) / (3z^2)
        e.num = {{1, 0}, {0, 0}, {0, 0}, {2, 0}};
        e.den = {{0, 0}, {0, 0}, {3, 0}};
        e.graph_recipe = "newton-cubic";
        e.notes = "cubic Newton map; three fixed root basins, repelling fixed point at infinity";
        e.fixtures.postcritical_size = 4;
        e.fixtures.min_components = 3;
        e.fixtures.invariance_bound = 1e-6;
        e.fixtures.converges_k1 = true;
    } else {
        throw UnknownEntry("catalog: unknown entry " + name);
    }
    return e;
}

}  // namespace dynamo
