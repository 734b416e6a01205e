#include "dynamo/config.hpp"

#include <stdexcept>

namespace dynamo {

void RunConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0)) throw std::invalid_argument(std::string("config: ") + name + " must be positive");
    };
    positive(min_diameter, "min_diameter");
    positive(eps_min, "eps_min");
    positive(edge_step, "edge_step");
    positive(ray_step, "ray_step");
    positive(lift_tol, "lift_tol");
    positive(land_tol, "land_tol");
    positive(tube_radius, "tube_radius");
    positive(tol, "tol");
    if (resolution < 256 || resolution > 8192 || (resolution & (resolution - 1)) != 0)
        throw std::invalid_argument("config: resolution must be a power of two in [256, 8192]");
    if (n < 1 || n_max < n) throw std::invalid_argument("config: need 1 <= n <= n_max");
    if (k_max < 0) throw std::invalid_argument("config: k_max must be non-negative");
}

}  // namespace dynamo
