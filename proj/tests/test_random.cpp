#include "doctest.h"

#include "slab/grid.hpp"
#include "slab/random_field.hpp"

#include <cmath>
#include <cstring>

using namespace slab;

TEST_CASE("seeded draws are bit-exact and seed-sensitive") {
    Grid1D g = Grid1D::with_spacing(-60.0, 60.0, 0.05);
    FieldState a = random_initial(7, g, -40.0, 40.0, 0.5, 1.0, RandomFieldKind::Bumps);
    FieldState b = random_initial(7, g, -40.0, 40.0, 0.5, 1.0, RandomFieldKind::Bumps);
    CHECK(std::memcmp(a.psi.data(), b.psi.data(), a.psi.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(a.pi.data(), b.pi.data(), a.pi.size() * sizeof(double)) == 0);

    FieldState c = random_initial(8, g, -40.0, 40.0, 0.5, 1.0, RandomFieldKind::Bumps);
    double diff = 0.0;
    for (int k = 0; k < g.n_points; ++k) diff = std::max(diff, std::abs(a.psi_re(k) - c.psi_re(k)));
    CHECK(diff > 1e-3);
}

TEST_CASE("bump draws respect amplitude and support") {
    Grid1D g = Grid1D::with_spacing(-60.0, 60.0, 0.05);
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 11ull}) {
        FieldState s = random_initial(seed, g, -30.0, 30.0, 0.4, 1.5, RandomFieldKind::Bumps);
        double sup_psi = 0.0, sup_pi = 0.0;
        for (int k = 0; k < g.n_points; ++k) {
            sup_psi = std::max(sup_psi, std::abs(s.psi_re(k)));
            sup_pi = std::max(sup_pi, std::abs(s.pi_re(k)));
            // outside the support plus ramps (3 * smoothness) everything vanishes
            if (std::abs(g.x(k)) > 30.0 + 3.0 * 1.5 + 1e-9) {
                CHECK(s.psi_re(k) == 0.0);
                CHECK(s.pi_re(k) == 0.0);
            }
        }
        CHECK(sup_psi <= 0.4 + 1e-12);
        CHECK(sup_psi > 0.1);     // the draw is not degenerate
        CHECK(sup_pi <= 0.2 + 1e-12);
    }
}

TEST_CASE("kink train connects the vacua") {
    Grid1D g = Grid1D::with_spacing(-80.0, 80.0, 0.05);
    FieldState s = random_initial(5, g, -50.0, 50.0, 0.3, 1.0, RandomFieldKind::KinkTrain);
    // far field sits in a vacuum
    CHECK(std::abs(std::abs(s.psi_re(0)) - 1.0) < 1e-9);
    CHECK(std::abs(std::abs(s.psi_re(g.n_points - 1)) - 1.0) < 1e-9);
    // there is at least one sign change
    int changes = 0;
    for (int k = 1; k < g.n_points; ++k)
        if (s.psi_re(k - 1) * s.psi_re(k) < 0.0) ++changes;
    CHECK(changes >= 1);
    // a different seed moves the crossings
    FieldState t = random_initial(6, g, -50.0, 50.0, 0.3, 1.0, RandomFieldKind::KinkTrain);
    double diff = 0.0;
    for (int k = 0; k < g.n_points; ++k) diff = std::max(diff, std::abs(s.psi_re(k) - t.psi_re(k)));
    CHECK(diff > 0.1);
}

TEST_CASE("complex draws fill both components") {
    Grid1D g = Grid1D::with_spacing(-40.0, 40.0, 0.05);
    FieldState s =
        random_initial(9, g, -25.0, 25.0, 0.5, 1.0, RandomFieldKind::Bumps, FieldKind::Complex);
    REQUIRE(s.kind == FieldKind::Complex);
    double sup_im = 0.0, sup_re = 0.0;
    for (int k = 0; k < g.n_points; ++k) {
        sup_re = std::max(sup_re, std::abs(s.psi_re(k)));
        sup_im = std::max(sup_im, std::abs(s.psi_im(k)));
    }
    CHECK(sup_re > 0.0);
    CHECK(sup_im > 0.0);
    // amplitude bound applies to the modulus
    double sup_abs = 0.0;
    for (int k = 0; k < g.n_points; ++k) sup_abs = std::max(sup_abs, s.abs_psi(k));
    CHECK(sup_abs <= 0.5 + 1e-12);
}

TEST_CASE("smoothness controls the ramp length") {
    Grid1D g = Grid1D::with_spacing(-60.0, 60.0, 0.05);
    // narrow ramps: the field must vanish right outside support + 3*smoothness
    FieldState s = random_initial(4, g, -20.0, 20.0, 0.5, 0.5, RandomFieldKind::Bumps);
    for (int k = 0; k < g.n_points; ++k)
        if (std::abs(g.x(k)) > 21.5 + 1e-9) CHECK(s.psi_re(k) == 0.0);
}
