#include "slab/integrate.hpp"

#include <cmath>

namespace slab {

void IntegratorConfig::validate(const Grid1D& grid) const {
    if (!(dt > 0.0)) throw ConfigError("integrator: dt must be positive");
    if (dt > 0.9 * grid.dx + 1e-15) throw ConfigError("integrator: CFL violated, need dt <= 0.9*dx");
    if (record_every < 1) throw ConfigError("integrator: record_every must be >= 1");
    if (boundary.kind == Boundary::Kind::Sponge) {
        double domain = grid.x_max - grid.x_min;
        if (!(boundary.width > 0.0) || boundary.width >= 0.25 * domain)
            throw ConfigError("integrator: sponge width must be in (0, domain/4)");
    }
}

namespace {

inline double smoothstep01(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * (3.0 - 2.0 * u);
}

class Stepper {
public:
    Stepper(const ModelSpec& model, const IntegratorConfig& cfg, const Grid1D& grid,
            ExtraForce extra)
        : model_(model), cfg_(cfg), grid_(grid), extra_(std::move(extra)) {
        cfg.validate(grid);
        V_ = sample_potential(model.external, grid);
        if (cfg.boundary.kind == Boundary::Kind::Sponge) {
            damp_half_.resize(static_cast<size_t>(grid.n_points), 1.0);
            double w = cfg.boundary.width;
            for (int k = 0; k < grid.n_points; ++k) {
                double x = grid.x(k);
                double s = smoothstep01((x - (grid.x_max - w)) / w) +
                           smoothstep01(((grid.x_min + w) - x) / w);
                damp_half_[static_cast<size_t>(k)] = std::exp(-cfg.boundary.strength * s * cfg.dt * 0.5);
            }
        }
    }

    void force(const FieldState& s, std::vector<double>& f) {
        const int n = s.n();
        const double inv_dx2 = 1.0 / (grid_.dx * grid_.dx);
        const bool periodic = cfg_.boundary.kind == Boundary::Kind::Periodic;
        const auto& nl = model_.nonlinearity;
        const double m2 = model_.mass2;
        f.assign(s.psi.size(), 0.0);

        if (s.kind == FieldKind::Real) {
            const double* p = s.psi.data();
            for (int k = 1; k < n - 1; ++k) {
                double pk = p[k];
                double lap = (p[k + 1] - 2.0 * pk + p[k - 1]) * inv_dx2;
                double vx = V_.empty() ? 0.0 : V_[static_cast<size_t>(k)];
                f[static_cast<size_t>(k)] = lap + (nl.F_factor(pk * pk) - m2 - vx) * pk;
            }
            if (periodic) {
                double v0 = V_.empty() ? 0.0 : V_[0];
                double vn = V_.empty() ? 0.0 : V_[static_cast<size_t>(n - 1)];
                f[0] = (p[1] - 2.0 * p[0] + p[n - 1]) * inv_dx2 + (nl.F_factor(p[0] * p[0]) - m2 - v0) * p[0];
                f[static_cast<size_t>(n - 1)] = (p[0] - 2.0 * p[n - 1] + p[n - 2]) * inv_dx2 +
                                                (nl.F_factor(p[n - 1] * p[n - 1]) - m2 - vn) * p[n - 1];
            }
        } else {
            const double* p = s.psi.data();
            auto cforce = [&](int k, int kl, int kr) {
                size_t i = 2 * static_cast<size_t>(k), il = 2 * static_cast<size_t>(kl), ir = 2 * static_cast<size_t>(kr);
                double pr = p[i], pim = p[i + 1];
                double vx = V_.empty() ? 0.0 : V_[static_cast<size_t>(k)];
                double c = nl.F_factor(pr * pr + pim * pim) - m2 - vx;
                f[i] = (p[ir] - 2.0 * pr + p[il]) * inv_dx2 + c * pr;
                f[i + 1] = (p[ir + 1] - 2.0 * pim + p[il + 1]) * inv_dx2 + c * pim;
            };
            for (int k = 1; k < n - 1; ++k) cforce(k, k - 1, k + 1);
            if (periodic) {
                cforce(0, n - 1, 1);
                cforce(n - 1, n - 2, 0);
            }
        }
        if (extra_) extra_(s, f);
    }

    void apply_boundary(FieldState& s) {
        const int n = s.n();
        switch (cfg_.boundary.kind) {
            case Boundary::Kind::Periodic: return;
            case Boundary::Kind::DirichletVacuum: {
                s.psi_re(0) = cfg_.boundary.left_value;
                s.psi_re(n - 1) = cfg_.boundary.right_value;
                s.pi_re(0) = 0.0;
                s.pi_re(n - 1) = 0.0;
                if (s.kind == FieldKind::Complex) {
                    s.psi_im(0) = s.psi_im(n - 1) = 0.0;
                    s.pi_im(0) = s.pi_im(n - 1) = 0.0;
                }
                return;
            }
            case Boundary::Kind::Sponge: {
                s.psi_re(0) = s.psi_re(n - 1) = 0.0;
                s.pi_re(0) = s.pi_re(n - 1) = 0.0;
                if (s.kind == FieldKind::Complex) {
                    s.psi_im(0) = s.psi_im(n - 1) = 0.0;
                    s.pi_im(0) = s.pi_im(n - 1) = 0.0;
                }
                return;
            }
        }
    }

    void damp(FieldState& s) {
        if (damp_half_.empty()) return;
        const int n = s.n();
        if (s.kind == FieldKind::Real) {
            for (int k = 0; k < n; ++k) s.pi[static_cast<size_t>(k)] *= damp_half_[static_cast<size_t>(k)];
        } else {
            for (int k = 0; k < n; ++k) {
                double d = damp_half_[static_cast<size_t>(k)];
                s.pi[2 * static_cast<size_t>(k)] *= d;
                s.pi[2 * static_cast<size_t>(k) + 1] *= d;
            }
        }
    }

    void do_step(FieldState& s) {
        const double dt = cfg_.dt;
        force(s, f_);
        for (size_t i = 0; i < s.pi.size(); ++i) s.pi[i] += 0.5 * dt * f_[i];
        damp(s);
        for (size_t i = 0; i < s.psi.size(); ++i) s.psi[i] += dt * s.pi[i];
        apply_boundary(s);
        force(s, f_);
        for (size_t i = 0; i < s.pi.size(); ++i) s.pi[i] += 0.5 * dt * f_[i];
        damp(s);
    }

    void check_finite(const FieldState& s, long step_index) const {
        for (int k = 0; k < s.n(); ++k) {
            if (!std::isfinite(s.psi_re(k)) || !std::isfinite(s.pi_re(k)) ||
                (s.kind == FieldKind::Complex && (!std::isfinite(s.psi_im(k)) || !std::isfinite(s.pi_im(k))))) {
                throw NumericalAbort("field became non-finite at node " + std::to_string(k) +
                                         ", step " + std::to_string(step_index) +
                                         ", t=" + std::to_string(s.time),
                                     step_index, k, s.time);
            }
        }
    }

private:
    ModelSpec model_;
    IntegratorConfig cfg_;
    Grid1D grid_;
    ExtraForce extra_;
    std::vector<double> V_;
    std::vector<double> damp_half_;
    std::vector<double> f_;
};

} // namespace

FieldState step(FieldState state, const ModelSpec& model, const IntegratorConfig& cfg) {
    Stepper st(model, cfg, state.grid, nullptr);
    double t0 = state.time;
    st.do_step(state);
    state.time = t0 + cfg.dt;
    return state;
}

Trajectory run(FieldState state, const ModelSpec& model, const IntegratorConfig& cfg,
               double t_end, const std::vector<Probe>& probes, const ExtraForce& extra,
               bool keep_snapshots) {
    if (t_end < state.time - 1e-12) throw ConfigError("run: t_end precedes the state time");
    Stepper st(model, cfg, state.grid, extra);

    const double t0 = state.time;
    const double span = t_end - t0;
    long nsteps = std::llround(span / cfg.dt);
    if (std::abs(nsteps * cfg.dt - span) > 1e-9) nsteps = static_cast<long>(std::ceil(span / cfg.dt - 1e-12));
    if (nsteps < 0) nsteps = 0;

    Trajectory traj;
    const bool complex_field = state.kind == FieldKind::Complex;
    auto record = [&](const FieldState& s) {
        traj.times.push_back(s.time);
        traj.observables["energy"].push_back(energy(s, model).total);
        traj.observables["momentum"].push_back(momentum(s));
        if (complex_field) traj.observables["charge"].push_back(charge(s));
        for (const auto& p : probes) traj.observables[p.name].push_back(p.fn(s));
        if (keep_snapshots) traj.snapshots.push_back(s);
    };

    record(state);
    for (long i = 1; i <= nsteps; ++i) {
        st.do_step(state);
        state.time = t0 + static_cast<double>(i) * cfg.dt;
        if (i % 128 == 0 || i == nsteps) st.check_finite(state, i);
        if (i % cfg.record_every == 0 || i == nsteps) record(state);
    }
    return traj;
}

} // namespace slab
