#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dynamo/graph.hpp"

namespace dynamo {

struct Rgb {
    uint8_t r = 0, g = 0, b = 0;
};

struct Image {
    int width = 0, height = 0;
    std::vector<Rgb> pixels;
    Image() = default;
    Image(int w, int h) : width(w), height(h), pixels(static_cast<size_t>(w) * h) {}
    Rgb& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
};

// Minimal RGB PNG encoder (zlib-deflated, no interlacing).
std::vector<uint8_t> encode_png(const Image& img);
void write_png(const std::string& path, const Image& img);

// Basin raster colored by component id (plain chart side by side with the
// inverted chart); Julia mask drawn dark.
Image render_basins(const FatouAtlas& atlas);

// SVG overlay: the basin raster of the plain chart embedded as PNG with the
// graph polylines drawn on top.
std::string svg_overlay(const FatouAtlas& atlas, const PlanarGraph& G);
void write_text(const std::string& path, const std::string& text);

}  // namespace dynamo
