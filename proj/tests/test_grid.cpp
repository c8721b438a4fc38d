#include "doctest.h"

#include "slab/grid.hpp"
#include "slab/model.hpp"
#include "slab/profile.hpp"

#include <cmath>

using namespace slab;

TEST_CASE("grid node placement") {
    Grid1D g = Grid1D::make(-2.0, 2.0, 401);
    CHECK(g.dx == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(g.x(0) == -2.0);
    CHECK(g.x(400) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(g.nearest_node(0.004) == 200);
    CHECK(g.nearest_node(-5.0) == 0);
    CHECK(g.nearest_node(5.0) == 400);

    Grid1D h = Grid1D::with_spacing(-10.0, 10.0, 0.05);
    CHECK(h.n_points == 401);
    CHECK(h.dx == doctest::Approx(0.05).epsilon(1e-12));

    CHECK_THROWS(Grid1D::make(0.0, 1.0, 2));
    CHECK_THROWS(Grid1D::make(1.0, 0.0, 10));
}

TEST_CASE("field state accessors real vs complex") {
    Grid1D g = Grid1D::make(0.0, 1.0, 11);
    FieldState r = FieldState::zero(g, FieldKind::Real);
    CHECK(r.psi.size() == 11);
    r.psi_re(3) = -0.75;
    CHECK(r.abs_psi(3) == 0.75);
    CHECK(r.psi_im(3) == 0.0);

    FieldState c = FieldState::zero(g, FieldKind::Complex);
    CHECK(c.psi.size() == 22);
    c.psi_re(4) = 3.0;
    c.psi_im(4) = 4.0;
    CHECK(c.abs_psi(4) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("kink rest energy is 2 sqrt(2)/3") {
    Grid1D g = Grid1D::with_spacing(-40.0, 40.0, 0.01);
    FieldState s = kink_state(KinkSpec{}, g);
    ModelSpec model;
    model.mass2 = 0.0;
    model.nonlinearity = Nonlinearity::ginzburg_landau();
    EnergySnapshot e = energy(s, model);
    CHECK(e.kinetic == 0.0);
    CHECK(e.total == doctest::Approx(0.9428090415820635).epsilon(1e-4));
    // BPS split: gradient and potential each carry half of the rest energy
    CHECK(e.gradient == doctest::Approx(e.potential).epsilon(1e-3));
}

TEST_CASE("moving kink momentum is gamma v m0") {
    Grid1D g = Grid1D::with_spacing(-60.0, 60.0, 0.01);
    KinkSpec spec;
    spec.v = 0.3;
    FieldState s = kink_state(spec, g);
    const double m0 = 0.9428090415820635;
    const double gamma = 1.0 / std::sqrt(1.0 - 0.09);
    CHECK(momentum(s) == doctest::Approx(gamma * 0.3 * m0).epsilon(1e-4));

    spec.v = -0.3;
    FieldState s2 = kink_state(spec, g);
    CHECK(momentum(s2) == doctest::Approx(-gamma * 0.3 * m0).epsilon(1e-4));
}

TEST_CASE("charge of a standing wave is omega times the squared norm") {
    SolitaryWaveProfile prof = solve_profile(Nonlinearity::row(3), 1.0, 0.6);
    Grid1D g = Grid1D::with_spacing(-40.0, 40.0, 0.01);
    FieldState s = moving_soliton(prof, 0.0, 0.0, 0.0, g);
    // ||phi||^2 for row3 at omega = 0.6 (independent quadrature value)
    CHECK(charge(s) == doctest::Approx(0.6 * 1.049755).epsilon(5e-4));
    CHECK_THROWS(charge(kink_state(KinkSpec{}, g)));
}

TEST_CASE("local l2 distance windows correctly") {
    Grid1D g = Grid1D::with_spacing(-20.0, 20.0, 0.01);
    FieldState a = FieldState::zero(g, FieldKind::Real);
    FieldState b = FieldState::zero(g, FieldKind::Real);
    for (int k = 0; k < g.n_points; ++k) {
        double x = g.x(k);
        b.psi_re(k) = std::abs(x) < 1.0 ? 1.0 : 0.0; // unit box
    }
    // distance over |x| < 5 is sqrt(int of 1 over [-1,1]) = sqrt(2)
    CHECK(local_l2_distance(a, b, 5.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-2));
    // a window that misses the box sees nothing
    for (int k = 0; k < g.n_points; ++k)
        if (std::abs(g.x(k)) < 8.0) b.psi_re(k) = 0.0;
    CHECK(local_l2_distance(a, b, 5.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("energy rejects mismatched field kinds") {
    Grid1D g = Grid1D::make(0.0, 1.0, 11);
    ModelSpec model;
    model.field_kind = FieldKind::Complex;
    FieldState s = FieldState::zero(g, FieldKind::Real);
    CHECK_THROWS(energy(s, model));
}
