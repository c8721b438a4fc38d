#include "doctest.h"

#include "slab/errors.hpp"
#include "slab/grid.hpp"
#include "slab/integrate.hpp"
#include "slab/ppm.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

using namespace slab;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path(name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(bool(f));
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

Rgb rgb(int r, int g, int b) {
    return Rgb{std::uint8_t(r), std::uint8_t(g), std::uint8_t(b)};
}

} // namespace

TEST_CASE("band palette matches the detector thresholds") {
    const double eps = 0.05;
    CHECK(band_color(1.2, eps) == rgb(200, 40, 40));    // above the +1 vacuum
    CHECK(band_color(-1.2, eps) == rgb(40, 60, 200));   // below the -1 vacuum
    CHECK(band_color(0.0, eps) == rgb(235, 215, 60));   // kink band
    CHECK(band_color(0.94, eps) == rgb(235, 215, 60));
    CHECK(band_color(1.0, eps) == rgb(255, 255, 255));  // near-vacuum
    CHECK(band_color(-0.99, eps) == rgb(255, 255, 255));
    CHECK(band_color(1.051, eps) == rgb(200, 40, 40));
    // a tighter epsilon reclassifies near-vacuum pixels
    CHECK(band_color(1.03, 0.02) == rgb(200, 40, 40));
    CHECK(band_color(1.03, 0.05) == rgb(255, 255, 255));
}

TEST_CASE("pixmap bytes are exactly the P6 encoding") {
    TempFile tf("test_ppm_exact.ppm");
    std::vector<Rgb> px = {{1, 2, 3}, {255, 0, 128}, {0, 0, 0}, {9, 8, 7}};
    write_ppm(tf.path, px, 2, 2);
    std::string bytes = slurp(tf.path);
    std::string expect = "P6\n2 2\n255\n";
    expect += std::string("\x01\x02\x03", 3);
    expect += std::string("\xff\x00\x80", 3);
    expect += std::string("\x00\x00\x00", 3);
    expect += std::string("\x09\x08\x07", 3);
    CHECK(bytes == expect);

    CHECK_THROWS_AS(write_ppm(tf.path, px, 3, 2), ConfigError);
    CHECK_THROWS_AS(write_ppm(tf.path, px, 0, 0), ConfigError);
}

TEST_CASE("band heatmap is one row per frame") {
    Grid1D g = Grid1D::make(0.0, 2.0, 3);
    Trajectory traj;
    double rows[2][3] = {{-1.2, 0.0, 1.2}, {1.0, 0.5, -1.06}};
    for (int f = 0; f < 2; ++f) {
        FieldState s = FieldState::zero(g, FieldKind::Real);
        for (int k = 0; k < 3; ++k) s.psi_re(k) = rows[f][k];
        traj.times.push_back(f);
        traj.snapshots.push_back(std::move(s));
    }
    std::vector<Rgb> px = heatmap_bands(traj, 0.05);
    REQUIRE(px.size() == 6);
    CHECK(px[0] == rgb(40, 60, 200));   // frame 0 leftmost: blue
    CHECK(px[1] == rgb(235, 215, 60));  // yellow
    CHECK(px[2] == rgb(200, 40, 40));   // red
    CHECK(px[3] == rgb(255, 255, 255)); // frame 1: vacuum
    CHECK(px[4] == rgb(235, 215, 60));
    CHECK(px[5] == rgb(40, 60, 200));

    TempFile tf("test_ppm_bands.ppm");
    write_heatmap_bands(tf.path, traj, 0.05);
    std::string bytes = slurp(tf.path);
    CHECK(bytes.substr(0, 9) == "P6\n3 2\n25");
    CHECK(bytes.size() == 11 + 18);
}

TEST_CASE("magnitude heatmap normalizes by the trajectory peak") {
    Grid1D g = Grid1D::make(0.0, 2.0, 3);
    Trajectory traj;
    FieldState s = FieldState::zero(g, FieldKind::Complex);
    s.psi_re(0) = 0.0;
    s.psi_im(0) = 2.0; // |psi| = 2 (the peak)
    s.psi_re(1) = 1.0; // |psi| = 1
    s.psi_re(2) = 0.0; // |psi| = 0
    traj.times.push_back(0.0);
    traj.snapshots.push_back(std::move(s));
    std::vector<Rgb> px = heatmap_magnitude(traj);
    REQUIRE(px.size() == 3);
    CHECK(px[0] == rgb(255, 255, 255));
    CHECK(px[1] == rgb(128, 128, 128)); // round(127.5) away from zero
    CHECK(px[2] == rgb(0, 0, 0));

    Trajectory empty;
    CHECK_THROWS_AS(heatmap_magnitude(empty), ConfigError);
    CHECK_THROWS_AS(heatmap_bands(empty, 0.05), ConfigError);
}
