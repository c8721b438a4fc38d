#include "slab/ppm.hpp"

#include "slab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace slab {

Rgb band_color(double psi, double eps) {
    if (psi > 1.0 + eps) return {200, 40, 40};    // red: above the +1 vacuum
    if (psi < -(1.0 + eps)) return {40, 60, 200}; // blue: below the -1 vacuum
    if (std::abs(psi) < 1.0 - eps) return {235, 215, 60}; // yellow: the kink band
    return {255, 255, 255};                               // near-vacuum
}

void write_ppm(const std::string& path, const std::vector<Rgb>& pixels, int width, int height) {
    if (width <= 0 || height <= 0 || pixels.size() != std::size_t(width) * std::size_t(height))
        throw ConfigError("ppm: pixel count does not match width*height");
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write image: " + path);
    f << "P6\n" << width << " " << height << "\n255\n";
    for (const Rgb& p : pixels) {
        char px[3] = {char(p.r), char(p.g), char(p.b)};
        f.write(px, 3);
    }
    if (!f) throw ConfigError("short image write: " + path);
}

std::vector<Rgb> heatmap_bands(const Trajectory& traj, double eps) {
    if (traj.snapshots.empty()) throw ConfigError("heatmap: trajectory has no snapshots");
    const int n = traj.snapshots[0].grid.n_points;
    std::vector<Rgb> px;
    px.reserve(traj.snapshots.size() * std::size_t(n));
    for (const FieldState& s : traj.snapshots)
        for (int k = 0; k < n; ++k) px.push_back(band_color(s.psi_re(k), eps));
    return px;
}

std::vector<Rgb> heatmap_magnitude(const Trajectory& traj) {
    if (traj.snapshots.empty()) throw ConfigError("heatmap: trajectory has no snapshots");
    const int n = traj.snapshots[0].grid.n_points;
    double peak = 0.0;
    for (const FieldState& s : traj.snapshots)
        for (int k = 0; k < n; ++k) peak = std::max(peak, s.abs_psi(k));
    if (peak <= 0.0) peak = 1.0;
    std::vector<Rgb> px;
    px.reserve(traj.snapshots.size() * std::size_t(n));
    for (const FieldState& s : traj.snapshots)
        for (int k = 0; k < n; ++k) {
            double u = std::clamp(s.abs_psi(k) / peak, 0.0, 1.0);
            auto g = std::uint8_t(std::lround(255.0 * u));
            px.push_back({g, g, g});
        }
    return px;
}

void write_heatmap_bands(const std::string& path, const Trajectory& traj, double eps) {
    write_ppm(path, heatmap_bands(traj, eps), traj.snapshots[0].grid.n_points,
              int(traj.snapshots.size()));
}

void write_heatmap_magnitude(const std::string& path, const Trajectory& traj) {
    write_ppm(path, heatmap_magnitude(traj), traj.snapshots[0].grid.n_points,
              int(traj.snapshots.size()));
}

} // namespace slab
