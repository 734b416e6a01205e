#include <cstdio>

#include "dynamo/render.hpp"

namespace dynamo {

namespace {

Rgb palette(int id) {
    static const Rgb colors[] = {{66, 135, 245},  {240, 140, 60},  {90, 200, 120},
                                 {200, 90, 200},  {230, 210, 80},  {90, 200, 220},
                                 {160, 110, 230}, {230, 110, 130}, {140, 170, 90}};
    if (id < 0) return {20, 20, 24};
    return colors[static_cast<size_t>(id) % (sizeof colors / sizeof colors[0])];
}

std::string base64(const std::vector<uint8_t>& data) {
    static const char* alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    for (size_t i = 0; i < data.size(); i += 3) {
        uint32_t v = static_cast<uint32_t>(data[i]) << 16;
        if (i + 1 < data.size()) v |= static_cast<uint32_t>(data[i + 1]) << 8;
        if (i + 2 < data.size()) v |= data[i + 2];
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out.push_back(i + 1 < data.size() ? alphabet[(v >> 6) & 63] : '=');
        out.push_back(i + 2 < data.size() ? alphabet[v & 63] : '=');
    }
    return out;
}

}  // namespace

Image render_basins(const FatouAtlas& atlas) {
    const BasinGrid& g = atlas.grid;
    int res = g.resolution;
    Image img(2 * res, res);
    for (int chart = 0; chart < 2; ++chart) {
        for (int i = 0; i < res; ++i) {
            for (int j = 0; j < res; ++j) {
                Rgb c = palette(atlas.comp_of[chart][static_cast<size_t>(g.flat(i, j))]);
                if (g.julia_at(chart, i, j)) c = {20, 20, 24};
                img.at(chart * res + j, res - 1 - i) = c;
            }
        }
    }
    return img;
}

std::string svg_overlay(const FatouAtlas& atlas, const PlanarGraph& G) {
    const BasinGrid& g = atlas.grid;
    int res = g.resolution;

    // plain-chart raster only; graph drawn in chart coordinates
    Image img(res, res);
    for (int i = 0; i < res; ++i)
        for (int j = 0; j < res; ++j) {
            Rgb c = palette(atlas.comp_of[0][static_cast<size_t>(g.flat(i, j))]);
            if (g.julia_at(0, i, j)) c = {20, 20, 24};
            img.at(j, res - 1 - i) = c;
        }
    std::string png64 = base64(encode_png(img));

    auto to_px = [&](const SpherePoint& p) -> std::pair<double, double> {
        cplx c = p.inf ? cplx(1e9, 1e9) : p.z;
        double x = (c.real() + g.extent) / (2 * g.extent) * res;
        double y = (g.extent - c.imag()) / (2 * g.extent) * res;
        return {x, y};
    };

    std::string svg;
    char buf[256];
    snprintf(buf, sizeof buf,
             "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
             "viewBox=\"0 0 %d %d\">\n",
             res, res, res, res);
    svg += buf;
    svg += "<image width=\"" + std::to_string(res) + "\" height=\"" + std::to_string(res) +
           "\" href=\"data:image/png;base64," + png64 + "\"/>\n";
    for (const auto& e : G.edges) {
        svg += "<polyline fill=\"none\" stroke=\"#ffffff\" stroke-width=\"1.2\" points=\"";
        for (const auto& p : e.polyline) {
            if (p.inf || std::abs(p.z) > 2.5 * g.extent) continue;
            auto [x, y] = to_px(p);
            snprintf(buf, sizeof buf, "%.2f,%.2f ", x, y);
            svg += buf;
        }
        svg += "\"/>\n";
    }
    for (const auto& v : G.vertices) {
        if (v.pos.inf || std::abs(v.pos.z) > 2.0 * g.extent) continue;
        auto [x, y] = to_px(v.pos);
        snprintf(buf, sizeof buf,
                 "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n", x, y,
                 v.kind == VertexKind::FatouCenter ? "#ffd54a" : "#ff5252");
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace dynamo
