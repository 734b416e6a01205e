#pragma once

#include "dynamo/pullback.hpp"

namespace dynamo {

struct RasterTooCoarse : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ThresholdNotMet : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Sector {
    int component_id = -1;
    double theta_lo = 0.0, theta_hi = 0.0;  // ccw interval, turns
    double extent = 0.0;                    // |theta_hi - theta_lo| mod 1 (1 = full turn)
    double r = 0.0;
    int level = 0;
    double width = 0.0;
    double r_residual = 0.0;  // |measured modulus on the cut curve - r|
    int face_id = -1;
};

struct Face {
    int id = -1;
    int level = 0;
    size_t pixel_count = 0;
    double diameter = 0.0;
    bool simply_connected = true;
    SpherePoint sample;
};

struct TileDecomposition {
    int face_id = -1;
    double subface_diameter = 0.0;
    std::vector<int> sector_ids;
    double subtile_diameter = 0.0;  // diam of the subtile
    double rho = 0.0;
    bool tile_defined = false;      // false when the subface exceeds the threshold
};

struct TileSet {
    int level = 0;
    std::vector<int> face_of[2];   // per pixel: face id or -1 (graph trace)
    std::vector<Face> faces;
    std::vector<Sector> sectors;
    std::vector<TileDecomposition> tiles;
    double max_subface_diameter = 0.0;
    double max_sector_width = 0.0;
    double max_rho = 0.0;           // over defined tiles; 0 when none defined
    double max_angle_excess = 0.0;  // extent - 1/deg(f^n|_U), clamped at 0
    double max_r_residual = 0.0;
};

// Faces of f^{-n}(G) on the atlas raster; the graph trace is rasterized with
// sub-pixel sampling so regions cannot leak across edges.
TileSet faces(const GraphContext& ctx, const PostcriticalData& pcf, const PlanarGraph& G, int n);

// Full decomposition: subfaces, sectors (with parameters and widths), tiles
// and rho where the threshold permits.
TileSet decompose_level(const GraphContext& ctx, const PostcriticalData& pcf, const PlanarGraph& G,
                        int n, double eps0 = 0.05);

double sector_width(const GraphContext& ctx, const Sector& s, int rho_samples = 64,
                    int arc_samples = 32);

struct DecayRow {
    int level = 0;
    int faces = 0;
    int sectors = 0;
    double max_subface_diam = 0.0;
    double max_width = 0.0;
    double max_rho = 0.0;
    double max_angle_excess = 0.0;
    double max_r_residual = 0.0;
};
std::vector<DecayRow> decay_report(const GraphContext& ctx, const PostcriticalData& pcf,
                                   const PlanarGraph& G, const std::vector<int>& levels,
                                   double eps0 = 0.05,
                                   std::vector<TileSet>* keep_sets = nullptr);
std::string decay_csv(const std::vector<DecayRow>& rows);

}  // namespace dynamo
