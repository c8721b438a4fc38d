#include "doctest.h"

#include "slab/diagnostics.hpp"
#include "slab/effective.hpp"
#include "slab/errors.hpp"
#include "slab/grid.hpp"
#include "slab/integrate.hpp"
#include "slab/model.hpp"
#include "slab/profile.hpp"

#include <cmath>
#include <vector>

using namespace slab;

namespace {

ModelSpec family_model() {
    ModelSpec m;
    m.mass2 = 1.0;
    m.nonlinearity = Nonlinearity::row(3);
    m.field_kind = FieldKind::Complex;
    return m;
}

const SolitonFamilyTable& table() {
    static SolitonFamilyTable t = tabulate_family(family_model(), 0.6, symmetric_v_grid(0.4, 10));
    return t;
}

} // namespace

TEST_CASE("velocity grids are symmetric and even") {
    std::vector<double> g = symmetric_v_grid(0.4, 10);
    REQUIRE(g.size() == 21);
    CHECK(g.front() == doctest::Approx(-0.4).epsilon(1e-14));
    CHECK(g.back() == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(g[10] == doctest::Approx(0.0).epsilon(1e-14));
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(g[i] == doctest::Approx(-g[g.size() - 1 - i]).epsilon(1e-13));
}

TEST_CASE("family table has the boost kinematics") {
    const SolitonFamilyTable& t = table();
    REQUIRE(t.rows.size() == 21);
    CHECK(t.base_omega == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(t.spans(0.6));
    CHECK(!t.spans(0.2));

    // momentum odd, energy even, momentum strictly increasing
    CHECK(std::abs(t.P_of_v(0.0)) < 1e-10);
    for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i].P > t.rows[i - 1].P);
    CHECK(t.E_of_v(0.4) == doctest::Approx(t.E_of_v(-0.4)).epsilon(1e-10));
    CHECK(t.P_of_v(0.4) == doctest::Approx(-t.P_of_v(-0.4)).epsilon(1e-10));

    // relativistic family: E(v) = gamma E0, P(v) = gamma v E0
    double E0 = t.E_of_v(0.0);
    double gamma = 1.0910894511799618; // at v = 0.4
    CHECK(E0 == doctest::Approx(0.755351).epsilon(1e-3));
    CHECK(t.E_of_v(0.4) / E0 == doctest::Approx(gamma).epsilon(1e-4));
    CHECK(t.P_of_v(0.4) == doctest::Approx(gamma * 0.4 * E0).epsilon(5e-4));
    CHECK(t.P_of_v(0.4) == doctest::Approx(0.3296509914).epsilon(1e-3));

    // interpolation round trips and the group-velocity identity dE/dP = v
    CHECK(t.v_of_P(t.P_of_v(0.23)) == doctest::Approx(0.23).epsilon(1e-4));
    CHECK(t.E_of_P(t.P_of_v(0.32)) == doctest::Approx(t.E_of_v(0.32)).epsilon(1e-10));
    CHECK(t.dE_dP(t.P_of_v(0.32)) == doctest::Approx(0.32).epsilon(2e-2));
    CHECK(t.P_min() == doctest::Approx(-t.P_max()).epsilon(1e-10));

    // profile cache returns one object per frequency
    const SolitaryWaveProfile& p1 = t.profile(0.62);
    const SolitaryWaveProfile& p2 = t.profile(0.62);
    CHECK(&p1 == &p2);
    CHECK(p1.omega == doctest::Approx(0.62).epsilon(1e-12));
}

TEST_CASE("effective mass fit matches the rest energy") {
    EffectiveMassFit f = fit_effective_mass(table());
    CHECK(f.r2 > 0.999);
    CHECK(f.rest_energy == doctest::Approx(0.755351).epsilon(1e-3));
    CHECK(std::abs(f.mass - f.rest_energy) / f.rest_energy < 0.02);
}

TEST_CASE("effective mass fit rejects a non-quadratic table") {
    SolitonFamilyTable bad;
    bad.model = family_model();
    for (int i = -2; i <= 2; ++i) {
        FamilyRow r;
        r.v = 0.1 * i;
        r.P = r.v;
        r.E = std::abs(r.v); // kinked, not quadratic in P
        bad.rows.push_back(r);
    }
    CHECK_THROWS_AS(fit_effective_mass(bad), NumericalAbort);
}

TEST_CASE("restriction of a cosine potential attenuates its amplitude") {
    const SolitaryWaveProfile& prof = table().profile(0.6);
    ExternalPotential V = ExternalPotential::cosine(-0.2, 0.31);
    ExternalPotential R = restrict_potential(V, prof);
    REQUIRE(R.kind == ExternalPotential::Kind::Cosine);
    CHECK(R.wavenumber == doctest::Approx(0.31).epsilon(1e-14));
    // (1/2) a smear(k) |phi|^2 with smear(0.31) = 0.958407, |phi|^2 = 1.049755
    CHECK(R.amplitude == doctest::Approx(-0.100609).epsilon(2e-3));
    CHECK(R(0.0) == doctest::Approx(R.amplitude).epsilon(1e-12));
    CHECK(R.derivative(2.0) ==
          doctest::Approx(-R.amplitude * 0.31 * std::sin(0.31 * 2.0)).epsilon(1e-10));

    // zero potential passes through untouched
    ExternalPotential Z;
    CHECK(restrict_potential(Z, prof).is_zero());
}

TEST_CASE("restriction of a tabulated potential matches the cosine closed form") {
    const SolitaryWaveProfile& prof = table().profile(0.6);
    Grid1D g = Grid1D::with_spacing(-60.0, 60.0, 0.05);
    std::vector<double> vals(static_cast<std::size_t>(g.n_points));
    for (int k = 0; k < g.n_points; ++k) vals[static_cast<std::size_t>(k)] = -0.2 * std::cos(0.31 * g.x(k));
    ExternalPotential tab = ExternalPotential::tabulated(std::move(vals), -60.0, 0.05);
    ExternalPotential R = restrict_potential(tab, prof);
    ExternalPotential C = restrict_potential(ExternalPotential::cosine(-0.2, 0.31), prof);
    REQUIRE(R.kind == ExternalPotential::Kind::Tabulated);
    for (double q : {-20.0, -7.3, 0.0, 4.1, 18.0})
        CHECK(R(q) == doctest::Approx(C(q)).epsilon(2e-4));
}

TEST_CASE("free effective motion is uniform") {
    double P0 = table().P_of_v(0.3);
    EffectiveTrajectory eff = integrate_effective(table(), ExternalPotential{}, -1.0, P0, 0.01, 10.0);
    REQUIRE(!eff.aborted);
    REQUIRE(eff.times.size() == 1001);
    CHECK(eff.Pi.back() == doctest::Approx(P0).epsilon(1e-13));
    CHECK(eff.Q.back() - eff.Q.front() == doctest::Approx(0.3 * 10.0).epsilon(2e-2));
    CHECK(eff.h_drift < 1e-12);
}

TEST_CASE("effective oscillation in the washboard well") {
    ExternalPotential V = ExternalPotential::cosine(-0.2, 0.31);
    EffectiveTrajectory eff = integrate_effective(table(), V, 2.0, 0.0, 0.005, 120.0);
    REQUIRE(!eff.aborted);
    CHECK(eff.h_drift < 1e-6);
    double qmin = 1e9, qmax = -1e9, pimax = 0.0;
    for (double q : eff.Q) {
        qmin = std::min(qmin, q);
        qmax = std::max(qmax, q);
    }
    for (double p : eff.Pi) pimax = std::max(pimax, std::abs(p));
    // symmetric well about 0: turning points at +-Q0
    CHECK(qmax == doctest::Approx(2.0).epsilon(1e-2));
    CHECK(qmin == doctest::Approx(-2.0).epsilon(1e-2));
    CHECK(pimax > 0.05);
    CHECK(pimax < table().P_max());
}

TEST_CASE("effective integration reports leaving the table") {
    ExternalPotential V = ExternalPotential::cosine(-0.2, 0.31);
    // start near the table edge, rolling downhill: momentum must leave the range
    double P0 = 0.95 * table().P_max();
    EffectiveTrajectory eff = integrate_effective(table(), V, -5.0, P0, 0.01, 200.0);
    CHECK(eff.aborted);
    CHECK(eff.abort_time < 200.0);
    CHECK(eff.Pi.back() <= table().P_max());

    CHECK_THROWS_AS(integrate_effective(table(), V, 0.0, 10.0, 0.01, 1.0), ConfigError);
    CHECK_THROWS_AS(integrate_effective(table(), V, 0.0, 0.0, -0.01, 1.0), ConfigError);
}

TEST_CASE("manifold fit recovers planted parameters") {
    Grid1D g = Grid1D::with_spacing(-40.0, 40.0, 0.02);
    const SolitaryWaveProfile& prof = table().profile(0.6);
    FieldState s = moving_soliton(prof, 0.25, 3.7, 1.1, g);
    ManifoldFit fit = fit_manifold(s, table());
    CHECK(!fit.off_manifold);
    CHECK(fit.omega == doctest::Approx(0.6).epsilon(5e-3));
    CHECK(fit.v == doctest::Approx(0.25).epsilon(2e-2));
    CHECK(fit.q == doctest::Approx(3.7).epsilon(5e-3));
    double dtheta = std::atan2(std::sin(fit.theta - 1.1), std::cos(fit.theta - 1.1));
    CHECK(std::abs(dtheta) < 2e-2);
    CHECK(fit.residual / fit.state_norm < 5e-3);

    // refinement from a nearby seed lands on the same parameters
    ManifoldFit seed = fit;
    seed.q += 0.3;
    seed.v -= 0.05;
    ManifoldFit ref = refine_manifold_fit(s, table(), seed);
    CHECK(ref.q == doctest::Approx(fit.q).epsilon(1e-2));
    CHECK(ref.v == doctest::Approx(fit.v).epsilon(1e-2));
    CHECK(ref.residual / ref.state_norm < 5e-3);

    // a small featureless bump is flagged as off the manifold
    FieldState bump = FieldState::zero(g, FieldKind::Complex);
    for (int k = 0; k < g.n_points; ++k) {
        double x = g.x(k);
        bump.psi_re(k) = 0.05 * std::exp(-x * x);
    }
    CHECK(fit_manifold(bump, table()).off_manifold);
}

TEST_CASE("adiabatic comparison of a free soliton") {
    Grid1D g = Grid1D::with_spacing(-40.0, 40.0, 0.02);
    const SolitaryWaveProfile& prof = table().profile(0.6);
    ModelSpec model = family_model();
    IntegratorConfig cfg;
    cfg.dt = 0.01;
    cfg.record_every = 200;
    Trajectory pde = run(moving_soliton(prof, 0.25, -2.0, 0.0, g), model, cfg, 20.0);
    EffectiveTrajectory eff =
        integrate_effective(table(), ExternalPotential{}, -2.0, table().P_of_v(0.25), 0.01, 20.0);
    AdiabaticConfig acfg;
    acfg.q0_hint = -2.0;
    AdiabaticReport rep = compare_adiabatic(pde, eff, table(), acfg);
    REQUIRE(!rep.truncated);
    REQUIRE(rep.times.size() == pde.frames());
    CHECK(rep.sup_q_err < 0.2);
    CHECK(rep.sup_P_err < 0.05);
    CHECK(rep.q.back() == doctest::Approx(-2.0 + 0.25 * 20.0).epsilon(5e-2));
}
