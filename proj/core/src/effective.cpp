#include "slab/effective.hpp"

#include "slab/diagnostics.hpp"
#include "slab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace slab {

namespace {

// Monotone cubic (Fritsch-Carlson) interpolant; reduces to plain Hermite with
// safe end slopes on non-monotone data. Linear extrapolation past the ends.
struct Pchip {
    std::vector<double> x, y, d;

    static Pchip build(std::vector<double> xs, std::vector<double> ys) {
        const std::size_t n = xs.size();
        if (n < 2 || ys.size() != n) throw ConfigError("interpolant needs >= 2 rows");
        Pchip p;
        p.x = std::move(xs);
        p.y = std::move(ys);
        p.d.assign(n, 0.0);
        std::vector<double> h(n - 1), del(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = p.x[i + 1] - p.x[i];
            if (!(h[i] > 0.0)) throw ConfigError("interpolant abscissas must increase");
            del[i] = (p.y[i + 1] - p.y[i]) / h[i];
        }
        if (n == 2) {
            p.d[0] = p.d[1] = del[0];
            return p;
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (del[i - 1] * del[i] <= 0.0) {
                p.d[i] = 0.0;
            } else {
                double w1 = 2.0 * h[i] + h[i - 1], w2 = h[i] + 2.0 * h[i - 1];
                p.d[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
            }
        }
        auto end_slope = [](double h0, double h1, double d0, double d1) {
            double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if (d * d0 <= 0.0) return 0.0;
            if (std::abs(d) > 3.0 * std::abs(d0)) return 3.0 * d0;
            return d;
        };
        p.d[0] = end_slope(h[0], h[1], del[0], del[1]);
        p.d[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
        return p;
    }

    std::size_t interval(double t) const {
        if (t <= x.front()) return 0;
        if (t >= x.back()) return x.size() - 2;
        return std::size_t(std::upper_bound(x.begin(), x.end(), t) - x.begin()) - 1;
    }

    double operator()(double t) const {
        if (t < x.front()) return y.front() + d.front() * (t - x.front());
        if (t > x.back()) return y.back() + d.back() * (t - x.back());
        std::size_t i = interval(t);
        double h = x[i + 1] - x[i], s = (t - x[i]) / h;
        double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        double h10 = s * (1.0 - s) * (1.0 - s);
        double h01 = s * s * (3.0 - 2.0 * s);
        double h11 = s * s * (s - 1.0);
        return h00 * y[i] + h * h10 * d[i] + h01 * y[i + 1] + h * h11 * d[i + 1];
    }

    double derivative(double t) const {
        if (t < x.front()) return d.front();
        if (t > x.back()) return d.back();
        std::size_t i = interval(t);
        double h = x[i + 1] - x[i], s = (t - x[i]) / h;
        double g00 = 6.0 * s * (s - 1.0) / h;
        double g10 = (1.0 - s) * (1.0 - 3.0 * s);
        double g01 = -g00;
        double g11 = s * (3.0 * s - 2.0);
        return g00 * y[i] + g10 * d[i] + g01 * y[i + 1] + g11 * d[i + 1];
    }
};

Pchip table_EP(const SolitonFamilyTable& t) {
    std::vector<double> P, E;
    for (const FamilyRow& r : t.rows) {
        P.push_back(r.P);
        E.push_back(r.E);
    }
    return Pchip::build(std::move(P), std::move(E));
}

} // namespace

const SolitaryWaveProfile& SolitonFamilyTable::profile(double omega) const {
    long long key = llround(omega * 1e6);
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
    try {
        auto p = std::make_shared<SolitaryWaveProfile>(
            solve_profile(model.nonlinearity, model.mass2, omega, profile_tol));
        auto [ins, ok] = cache_.emplace(key, std::move(p));
        return *ins->second;
    } catch (const std::exception& e) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "profile solve failed at omega=%.6f: ", omega);
        const_cast<SolitonFamilyTable*>(this)->notices.push_back(buf + std::string(e.what()));
        throw;
    }
}

double SolitonFamilyTable::P_of_v(double v) const {
    std::vector<double> vs, Ps;
    for (const FamilyRow& r : rows) {
        vs.push_back(r.v);
        Ps.push_back(r.P);
    }
    return Pchip::build(std::move(vs), std::move(Ps))(v);
}

double SolitonFamilyTable::E_of_v(double v) const {
    std::vector<double> vs, Es;
    for (const FamilyRow& r : rows) {
        vs.push_back(r.v);
        Es.push_back(r.E);
    }
    return Pchip::build(std::move(vs), std::move(Es))(v);
}

double SolitonFamilyTable::v_of_P(double P) const {
    std::vector<double> Ps, vs;
    for (const FamilyRow& r : rows) {
        Ps.push_back(r.P);
        vs.push_back(r.v);
    }
    return Pchip::build(std::move(Ps), std::move(vs))(P);
}

double SolitonFamilyTable::E_of_P(double P) const { return table_EP(*this)(P); }
double SolitonFamilyTable::dE_dP(double P) const { return table_EP(*this).derivative(P); }

std::vector<double> symmetric_v_grid(double v_max, int n_half) {
    std::vector<double> v;
    for (int i = -n_half; i <= n_half; ++i) v.push_back(v_max * i / double(n_half));
    return v;
}

SolitonFamilyTable tabulate_family(const ModelSpec& model, double omega,
                                   const std::vector<double>& v_grid, double omega_lo,
                                   double omega_hi, double profile_tol) {
    if (v_grid.empty()) throw ConfigError("tabulate_family: empty velocity grid");
    SolitonFamilyTable t;
    t.model = model;
    t.model.external = ExternalPotential{}; // family lives in the free model
    t.base_omega = omega;
    t.profile_tol = profile_tol;
    double m = std::sqrt(model.mass2);
    t.omega_lo = omega_lo > 0.0 ? omega_lo : std::max(0.02 * m, omega - 0.15);
    t.omega_hi = omega_hi > 0.0 ? omega_hi : omega + 0.15;
    t.omega_hi = std::min(t.omega_hi, 0.995 * m);
    if (!(t.omega_lo < t.omega_hi)) throw ConfigError("tabulate_family: empty frequency window");

    const SolitaryWaveProfile& prof = t.profile(omega);
    Grid1D aux = Grid1D::with_spacing(-(prof.x_cut() + 10.0), prof.x_cut() + 10.0, 0.01);

    std::vector<double> vs = v_grid;
    std::sort(vs.begin(), vs.end());
    for (double v : vs) {
        FieldState s = moving_soliton(prof, v, 0.0, 0.0, aux);
        FamilyRow row;
        row.v = v;
        row.omega = omega;
        row.E = energy(s, t.model).total;
        row.P = momentum(s);
        t.rows.push_back(row);
    }
    for (std::size_t i = 0; i + 1 < t.rows.size(); ++i)
        if (!(t.rows[i + 1].P > t.rows[i].P))
            throw NumericalAbort("family momentum is not strictly increasing in v");
    return t;
}

EffectiveMassFit fit_effective_mass(const SolitonFamilyTable& table, double v_cut) {
    std::vector<double> u, E; // u = P^2
    for (const FamilyRow& r : table.rows) {
        if (std::abs(r.v) > v_cut + 1e-12) continue;
        u.push_back(r.P * r.P);
        E.push_back(r.E);
    }
    if (u.size() < 5) throw ConfigError("fit_effective_mass: need >= 5 small-velocity rows");

    LineFit lf = linear_fit(u, E);
    double Em = 0.0;
    for (double e : E) Em += e;
    Em /= E.size();
    double ss_tot = 0.0, ss_res = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double fit = lf.intercept + lf.slope * u[i];
        ss_tot += (E[i] - Em) * (E[i] - Em);
        ss_res += (E[i] - fit) * (E[i] - fit);
    }
    EffectiveMassFit out;
    out.rest_energy = lf.intercept;
    out.mass = lf.slope > 0.0 ? 1.0 / (2.0 * lf.slope) : 0.0;
    out.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    if (out.r2 < 0.99) throw NumericalAbort("effective-mass fit rejected: R^2 < 0.99");
    return out;
}

ExternalPotential restrict_potential(const ExternalPotential& V,
                                     const SolitaryWaveProfile& prof) {
    if (V.is_zero()) return V;
    const double dy = prof.dx_samples;
    if (V.kind == ExternalPotential::Kind::Cosine) {
        // (1/2) a ∫ cos(k(Q+y)) φ(y)² dy = (1/2) a cos(kQ) ∫ cos(ky) φ² dy (φ even)
        double c = 0.0;
        for (std::size_t j = 0; j < prof.x.size(); ++j) {
            double w = (j == 0 || j + 1 == prof.x.size()) ? 0.5 : 1.0;
            c += w * std::cos(V.wavenumber * prof.x[j]) * prof.phi[j] * prof.phi[j];
        }
        return ExternalPotential::cosine(0.5 * V.amplitude * 2.0 * dy * c, V.wavenumber);
    }
    std::vector<double> out(V.samples.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double x = V.x0 + static_cast<double>(i) * V.dx_tab;
        double acc = 0.0;
        for (std::size_t j = 0; j < prof.x.size(); ++j) {
            double w = (j == 0 || j + 1 == prof.x.size()) ? 0.5 : 1.0;
            acc += w * prof.phi[j] * prof.phi[j] * (V(x + prof.x[j]) + V(x - prof.x[j]));
        }
        out[i] = 0.5 * acc * dy;
    }
    return ExternalPotential::tabulated(std::move(out), V.x0, V.dx_tab);
}

EffectiveTrajectory integrate_effective(const SolitonFamilyTable& table,
                                        const ExternalPotential& V_bare, double Q0, double Pi0,
                                        double dt, double t_end) {
    if (!(dt > 0.0) || !(t_end >= 0.0)) throw ConfigError("integrate_effective: bad dt or t_end");
    Pchip EP = table_EP(table);
    const double Pmin = table.P_min(), Pmax = table.P_max();
    const ExternalPotential V = restrict_potential(V_bare, table.profile(table.base_omega));

    EffectiveTrajectory out;
    double Q = Q0, Pi = Pi0, t = 0.0;
    double H0 = EP(Pi) + V(Q);
    out.times.push_back(0.0);
    out.Q.push_back(Q);
    out.Pi.push_back(Pi);

    auto in_range = [&](double p) { return p >= Pmin && p <= Pmax; };
    if (!in_range(Pi)) throw ConfigError("integrate_effective: Pi0 outside the table");

    long long nsteps = llround(t_end / dt);
    for (long long s = 0; s < nsteps; ++s) {
        // classic 4th-order one-step scheme
        double k1q = EP.derivative(Pi), k1p = -V.derivative(Q);
        double p2 = Pi + 0.5 * dt * k1p;
        double k2q = EP.derivative(p2), k2p = -V.derivative(Q + 0.5 * dt * k1q);
        double p3 = Pi + 0.5 * dt * k2p;
        double k3q = EP.derivative(p3), k3p = -V.derivative(Q + 0.5 * dt * k2q);
        double p4 = Pi + dt * k3p;
        double k4q = EP.derivative(p4), k4p = -V.derivative(Q + dt * k3q);
        if (!in_range(p2) || !in_range(p3) || !in_range(p4)) {
            out.aborted = true;
            out.abort_time = t;
            return out;
        }
        Q += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        Pi += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        t = (s + 1) * dt;
        if (!in_range(Pi)) {
            out.aborted = true;
            out.abort_time = t;
            return out;
        }
        out.times.push_back(t);
        out.Q.push_back(Q);
        out.Pi.push_back(Pi);
        out.h_drift = std::max(out.h_drift, std::abs(EP(Pi) + V(Q) - H0));
    }
    return out;
}

AdiabaticReport compare_adiabatic(const Trajectory& pde, const EffectiveTrajectory& eff,
                                  const SolitonFamilyTable& table, const AdiabaticConfig& cfg) {
    SolitonTrack st = track_soliton(pde, table.model, cfg.q0_hint, cfg.window_halfwidth,
                                    cfg.continuity_gate);
    AdiabaticReport rep;
    rep.truncated = st.lost;
    rep.loss_time = st.loss_time;
    if (eff.times.size() < 2) throw ConfigError("compare_adiabatic: effective trajectory empty");
    const double et0 = eff.times.front();
    const double edt = eff.times[1] - eff.times[0];
    const double et_end = eff.times.back();

    ManifoldFit fit;
    bool have_fit = false;
    for (std::size_t i = 0; i < st.times.size(); i += cfg.sample_stride) {
        double t = st.times[i];
        if (t > et_end + 1e-9) break;
        // linear interpolation into the (uniform) effective series
        double u = (t - et0) / edt;
        std::size_t j = std::min(eff.times.size() - 2, std::size_t(std::max(0.0, u)));
        double f = std::clamp(u - double(j), 0.0, 1.0);
        double Q = (1.0 - f) * eff.Q[j] + f * eff.Q[j + 1];
        double Pi = (1.0 - f) * eff.Pi[j] + f * eff.Pi[j + 1];

        const FieldState& s = pde.snapshots[i];
        double P = 0.0;
        try {
            if (!have_fit) {
                fit = fit_manifold(s, table, cfg.fit_window_radius);
                have_fit = true;
            } else {
                fit.q = st.positions[i];
                fit = refine_manifold_fit(s, table, fit, cfg.fit_window_radius);
            }
            P = table.P_of_v(fit.v);
        } catch (const std::exception&) {
            // state left the representable family (decayed / outside the table):
            // report the comparison up to here instead of failing the whole run
            rep.truncated = true;
            rep.loss_time = t;
            break;
        }

        rep.times.push_back(t);
        rep.q.push_back(st.positions[i]);
        rep.Q.push_back(Q);
        rep.P.push_back(P);
        rep.Pi.push_back(Pi);
        rep.sup_q_err = std::max(rep.sup_q_err, std::abs(st.positions[i] - Q));
        rep.sup_P_err = std::max(rep.sup_P_err, std::abs(P - Pi));
    }
    return rep;
}

} // namespace slab
