#pragma once

#include <cstdint>
#include <vector>

#include "dynamo/ratmap.hpp"

namespace dynamo {

constexpr int JULIA = -1;

// Pixel address: chart 0 is the plain z chart, chart 1 the w = 1/z chart,
// both covering the square [-2,2]^2. Every sphere point has a home chart
// (|coord| <= 1 there, ties to chart 0).
struct PixelRef {
    int chart = 0;
    int i = 0;  // row (imag)
    int j = 0;  // col (real)
    bool valid = false;
};

// Rasterized basin decomposition of the sphere: per-pixel label is the index
// of the superattracting cycle the pixel center provably converges to
// (it enters that cycle's trap disk within max_iter), or JULIA.
class BasinGrid {
  public:
    BasinGrid() = default;

    int resolution = 0;
    int max_iter = 0;
    double extent = 2.0;
    std::vector<int> labels[2];                      // resolution^2 each, row-major
    std::vector<uint8_t> julia_mask[2];              // pixels the Julia set passes through
    std::vector<std::vector<SpherePoint>> cycles;    // label -> cycle points
    std::vector<std::vector<double>> trap_radii;     // per cycle, per point (chordal)

    double step() const { return 2.0 * extent / resolution; }

    SpherePoint pixel_point(int chart, int i, int j) const;
    PixelRef locate(const SpherePoint& p) const;      // home-chart pixel
    PixelRef locate_in_chart(const SpherePoint& p, int chart) const;
    int label_at(const SpherePoint& p) const;         // JULIA if outside home region

    // Chordal length of a pixel edge at p (chart metric factor).
    double pixel_size(const SpherePoint& p) const;

    bool julia_at(int chart, int i, int j) const {
        return julia_mask[chart][static_cast<size_t>(flat(i, j))] != 0 ||
               labels[chart][static_cast<size_t>(flat(i, j))] == JULIA;
    }
    bool near_julia(const SpherePoint& p, double pixels) const;
    void mark_julia(const SpherePoint& p);

    // Home region mask: chart c owns |coord| <= 1 (chart 0 wins ties).
    bool is_home(int chart, int i, int j) const;

    int flat(int i, int j) const { return i * resolution + j; }
};

// Labels every pixel of both charts. The parallel flag switches between the
// OpenMP kernel and the serial reference; both produce identical grids.
BasinGrid label_basins(const RationalMap& map, const PostcriticalData& pcf, int resolution,
                       int max_iter, bool parallel = true);
BasinGrid label_basins_serial(const RationalMap& map, const PostcriticalData& pcf, int resolution,
                              int max_iter);

// All fixed points with multiplicity (d+1 on the sphere).
std::vector<std::pair<SpherePoint, int>> fixed_points(const RationalMap& map);

}  // namespace dynamo
