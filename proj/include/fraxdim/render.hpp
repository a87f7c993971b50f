#pragma once

#include <fraxdim/scene.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace fraxdim {

struct RasterImage {
    int width = 0, height = 0;
    std::vector<std::uint8_t> on;  // row-major, row 0 at the top (largest second coordinate)
    // Chart window drawn, per axis; a 1-dimensional chart fills every row identically.
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;

    bool at(int x, int y) const { return on[static_cast<std::size_t>(y) * width + x] != 0; }
    std::size_t count() const;
};

// Multiplier of a unit tag: "1", "pi", "sqrt3*pi", "2*pi".
double unit_factor(const std::string& unit);

// Union of f_e(W_j) over all paths of length depth, on the unrolled chart window E0.
RasterImage render_gifs(const Gifs& g, const ChartSpace& space, int depth, int width, int height,
                        std::size_t path_cap = 10000000);
// Assembles the scene's GIFS (or takes the direct one) and renders with the scene settings,
// overridden by depth, width and height when they are non-negative / positive. Here depth
// counts iterations of E0, so an assembled GIFS draws paths of length depth - k0.
RasterImage render_attractor(const SceneConfig& cfg, int depth = -1, int width = 0, int height = -1);

std::string ppm_bytes(const RasterImage& img);  // binary P6, black on white
void write_ppm(const RasterImage& img, const std::string& path);

}  // namespace fraxdim
