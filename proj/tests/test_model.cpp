#include "doctest.h"

#include "slab/grid.hpp"
#include "slab/integrate.hpp"
#include "slab/model.hpp"

#include <cmath>

using namespace slab;

TEST_CASE("potential values of every nonlinearity kind") {
    Nonlinearity gl = Nonlinearity::ginzburg_landau();
    CHECK(gl.U(1.0) == 0.0);
    CHECK(gl.U(0.0) == 0.25);
    CHECK(gl.U(2.0) == doctest::Approx(2.25).epsilon(1e-15));

    Nonlinearity poly = Nonlinearity::polynomial(10.0, 6, 8.75, 5);
    // a s^(2m) - b s^(2n) at s = 0.5: 10*0.5^12 - 8.75*0.5^10
    CHECK(poly.U(0.5) ==
          doctest::Approx(10.0 * std::pow(0.5, 12) - 8.75 * std::pow(0.5, 10)).epsilon(1e-14));

    Nonlinearity cub = Nonlinearity::cubic(-1.0);
    CHECK(cub.U(2.0) == doctest::Approx(-4.0).epsilon(1e-15));

    CHECK(Nonlinearity::linear().U(3.0) == 0.0);
}

TEST_CASE("F equals minus U prime for every kind") {
    auto check_kind = [](const Nonlinearity& nl) {
        for (double s : {0.2, 0.5, 0.9, 1.3}) {
            double h = 1e-6;
            double dU = (nl.U(s + h) - nl.U(s - h)) / (2.0 * h);
            double F = nl.F_factor(s * s) * s;
            CHECK(F == doctest::Approx(-dU).epsilon(1e-6));
        }
    };
    check_kind(Nonlinearity::ginzburg_landau());
    check_kind(Nonlinearity::polynomial(1.0, 3, 0.61, 2));
    check_kind(Nonlinearity::polynomial(10.0, 4, 2.1, 2));
    check_kind(Nonlinearity::cubic(1.0));
    check_kind(Nonlinearity::cubic(-1.0));
}

TEST_CASE("polynomial table rows") {
    Nonlinearity r1 = Nonlinearity::row(1);
    CHECK(r1.a == 1.0);
    CHECK(r1.m == 3);
    CHECK(r1.b == 0.61);
    CHECK(r1.n == 2);
    Nonlinearity r2 = Nonlinearity::row(2);
    CHECK(r2.a == 10.0);
    CHECK(r2.m == 4);
    CHECK(r2.b == 2.1);
    CHECK(r2.n == 2);
    Nonlinearity r3 = Nonlinearity::row(3);
    CHECK(r3.a == 10.0);
    CHECK(r3.m == 6);
    CHECK(r3.b == 8.75);
    CHECK(r3.n == 5);
    CHECK_THROWS(Nonlinearity::row(4));
    CHECK_THROWS(Nonlinearity::polynomial(1.0, 2, 1.0, 3)); // needs m > n
}

TEST_CASE("force field matches the continuum operator on a plane wave") {
    // psi = cos(kx) on a periodic grid, linear model: force = -(k^2 + m^2) psi
    Grid1D g = Grid1D::make(0.0, 2.0 * M_PI, 629); // dx ~ 0.01, circumference 629*dx
    int n = g.n_points;
    double L = n * g.dx;
    double k = 2.0 * M_PI * 3.0 / L; // third periodic mode
    ModelSpec model;
    model.mass2 = 2.0;
    FieldState s = FieldState::zero(g, FieldKind::Real);
    for (int j = 0; j < n; ++j) s.psi_re(j) = std::cos(k * g.x(j));
    auto f = force_field(model, s, BoundaryTreatment::Periodic);
    for (int j = 0; j < n; ++j) {
        double expect = -(k * k + 2.0) * s.psi_re(j);
        CHECK(f[static_cast<size_t>(j)] == doctest::Approx(expect).epsilon(1e-3));
    }
}

TEST_CASE("phase equivariance of the complex force is exact") {
    // rotating (re, im) -> (-im, re) leaves |psi|^2 bit-identical, so the
    // force of the rotated state is the rotated force, with zero tolerance
    Grid1D g = Grid1D::make(-5.0, 5.0, 201);
    ModelSpec model;
    model.mass2 = 1.0;
    model.nonlinearity = Nonlinearity::row(3);
    model.field_kind = FieldKind::Complex;
    FieldState s = FieldState::zero(g, FieldKind::Complex);
    for (int j = 0; j < g.n_points; ++j) {
        double x = g.x(j);
        s.psi_re(j) = 0.7 * std::exp(-x * x / 4.0);
        s.psi_im(j) = 0.2 * std::exp(-x * x / 6.0) * x;
    }
    FieldState rot = s;
    for (int j = 0; j < g.n_points; ++j) {
        rot.psi_re(j) = -s.psi_im(j);
        rot.psi_im(j) = s.psi_re(j);
    }
    auto f = force_field(model, s, BoundaryTreatment::ClampEnds);
    auto frot = force_field(model, rot, BoundaryTreatment::ClampEnds);
    for (int j = 1; j + 1 < g.n_points; ++j) {
        CHECK(frot[2 * static_cast<size_t>(j)] == -f[2 * static_cast<size_t>(j) + 1]);
        CHECK(frot[2 * static_cast<size_t>(j) + 1] == f[2 * static_cast<size_t>(j)]);
    }
}

TEST_CASE("external potential kinds") {
    ExternalPotential vc = ExternalPotential::cosine(-0.2, 0.31);
    CHECK(vc(0.0) == doctest::Approx(-0.2).epsilon(1e-15));
    CHECK(vc(5.0) == doctest::Approx(-0.2 * std::cos(1.55)).epsilon(1e-15));
    CHECK(vc.derivative(5.0) == doctest::Approx(0.2 * 0.31 * std::sin(1.55)).epsilon(1e-12));

    std::vector<double> samples{0.0, 1.0, 4.0, 9.0}; // x^2 on 0,1,2,3
    ExternalPotential vt = ExternalPotential::tabulated(samples, 0.0, 1.0);
    CHECK(vt(1.5) == doctest::Approx(2.5).epsilon(1e-14)); // linear between 1 and 4
    CHECK(vt(-2.0) == 0.0);                                // clamped
    CHECK(vt(9.0) == 9.0);
    CHECK(vt.derivative(1.5) == doctest::Approx(3.0).epsilon(1e-6));

    CHECK(ExternalPotential::zero().is_zero());
    CHECK_THROWS(ExternalPotential::tabulated({1.0}, 0.0, 1.0));
}

TEST_CASE("external coupling enters energy as half V |psi|^2") {
    Grid1D g = Grid1D::with_spacing(-30.0, 30.0, 0.01);
    ModelSpec model;
    model.mass2 = 1.0;
    model.external = ExternalPotential::cosine(-0.2, 0.31);
    FieldState s = FieldState::zero(g, FieldKind::Real);
    for (int j = 0; j < g.n_points; ++j) {
        double x = g.x(j);
        s.psi_re(j) = std::exp(-x * x / 8.0);
    }
    double expect = 0.0;
    for (int j = 0; j < g.n_points; ++j) {
        double x = g.x(j);
        double w = (j == 0 || j + 1 == g.n_points) ? 0.5 * g.dx : g.dx;
        expect += w * 0.5 * (-0.2 * std::cos(0.31 * x)) * s.psi_re(j) * s.psi_re(j);
    }
    CHECK(energy(s, model).external == doctest::Approx(expect).epsilon(1e-12));
}
