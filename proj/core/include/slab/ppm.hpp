#pragma once

#include "slab/grid.hpp"
#include "slab/integrate.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace slab {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb& o) const { return r == o.r && g == o.g && b == o.b; }
};

/** Three-band palette (same predicate as the kink detector): red psi > 1+eps,
 *  blue psi < -(1+eps), yellow |psi| < 1-eps, white otherwise. */
Rgb band_color(double psi, double eps);

/** Binary P6 pixmap. Pixels are row-major, `width` per row. */
void write_ppm(const std::string& path, const std::vector<Rgb>& pixels, int width, int height);

/** Space-time heatmap, one row per recorded frame (t=0 on top). */
std::vector<Rgb> heatmap_bands(const Trajectory& traj, double eps);

/** Grayscale |psi| heatmap, normalized by the trajectory maximum. */
std::vector<Rgb> heatmap_magnitude(const Trajectory& traj);

void write_heatmap_bands(const std::string& path, const Trajectory& traj, double eps);
void write_heatmap_magnitude(const std::string& path, const Trajectory& traj);

} // namespace slab
