#include "slab/string_osc.hpp"

#include "slab/errors.hpp"
#include "slab/model.hpp"

#include <cmath>

namespace slab {

Trajectory simulate_string(const StringOscillatorModel& model, const FieldState& initial,
                           const IntegratorConfig& cfg, double t_end,
                           const std::vector<Probe>& probes, bool keep_snapshots) {
    if (initial.kind != FieldKind::Real) throw ConfigError("string model is real-valued");
    const Grid1D& g = initial.grid;
    if (!model.chi.empty() && model.chi.size() != std::size_t(g.n_points))
        throw ConfigError("chi must be sampled on the simulation grid");
    for (const auto& c : model.couplings)
        if (c.x < g.x_min || c.x > g.x_max)
            throw ConfigError("coupling point outside the grid");

    // Precompute node indices and weights for the point couplings.
    struct NodeWeight {
        int k;
        double w;
        const std::function<double(double)>* F;
        double x; // evaluation point for the hat variant
        bool hat;
    };
    std::vector<NodeWeight> nodes;
    for (const auto& c : model.couplings) {
        if (!c.F) throw ConfigError("coupling without a nonlinearity");
        if (model.two_node_hat) {
            double u = (c.x - g.x_min) / g.dx;
            int k = std::min(g.n_points - 2, std::max(0, int(std::floor(u))));
            double f = u - k;
            nodes.push_back({k, (1.0 - f) / g.dx, &c.F, c.x, true});
            nodes.push_back({k + 1, f / g.dx, &c.F, c.x, true});
        } else {
            nodes.push_back({g.nearest_node(c.x), 1.0 / g.dx, &c.F, c.x, false});
        }
    }

    ExtraForce extra = [&model, nodes, g](const FieldState& s, std::vector<double>& force) {
        for (const auto& nw : nodes) {
            // hat: F evaluated at the interpolated trace, spread with hat weights
            double y;
            if (nw.hat) {
                double u = (nw.x - g.x_min) / g.dx;
                int k = std::min(g.n_points - 2, std::max(0, int(std::floor(u))));
                double f = u - k;
                y = (1.0 - f) * s.psi_re(k) + f * s.psi_re(k + 1);
            } else {
                y = s.psi_re(nw.k);
            }
            force[nw.k] += nw.w * (*nw.F)(y);
        }
        if (!model.chi.empty() && model.F_distributed)
            for (int k = 0; k < s.n(); ++k)
                if (model.chi[k] != 0.0) force[k] += model.chi[k] * model.F_distributed(s.psi_re(k));
    };

    ModelSpec string = ModelSpec::linear_kg(0.0, FieldKind::Real);
    return run(initial, string, cfg, t_end, probes, extra, keep_snapshots);
}

TraceOracle trace_ode_oracle(const std::function<double(double)>& F, double y0,
                             const std::function<double(double)>& incoming, double dt,
                             double t_end) {
    if (!F) throw ConfigError("trace_ode_oracle: missing nonlinearity");
    if (!(dt > 0.0)) throw ConfigError("trace_ode_oracle: need dt > 0");
    auto rhs = [&](double t, double y) {
        double inc = incoming ? incoming(t) : 0.0;
        return 0.5 * F(y) + 2.0 * inc; // 2 y' = F(y) + 4 inc
    };
    TraceOracle out;
    double y = y0, t = 0.0;
    out.times.push_back(0.0);
    out.y.push_back(y);
    long long nsteps = llround(t_end / dt);
    for (long long s = 0; s < nsteps; ++s) {
        double k1 = rhs(t, y);
        double k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1);
        double k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2);
        double k4 = rhs(t + dt, y + dt * k3);
        y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t = (s + 1) * dt;
        if (!std::isfinite(y) || std::abs(y) > 1e6) {
            out.aborted = true;
            out.abort_time = t;
            return out;
        }
        out.times.push_back(t);
        out.y.push_back(y);
    }
    return out;
}

std::function<double(double)> incoming_from_initial(std::function<double(double)> psi0_prime,
                                                    std::function<double(double)> pi0,
                                                    double x_c) {
    return [psi0_prime = std::move(psi0_prime), pi0 = std::move(pi0), x_c](double t) {
        // free-field velocity: d/dt psi_free(x_c, t)
        //   = [psi0'(x_c+t) - psi0'(x_c-t)]/2 + [pi0(x_c+t) + pi0(x_c-t)]/2
        double v = 0.5 * (psi0_prime(x_c + t) - psi0_prime(x_c - t)) +
                   0.5 * (pi0(x_c + t) + pi0(x_c - t));
        return 0.5 * v;
    };
}

double dalembert_value(const std::function<double(double)>& psi0,
                       const std::function<double(double)>& pi0_antiderivative, double x,
                       double t) {
    return 0.5 * (psi0(x - t) + psi0(x + t)) +
           0.5 * (pi0_antiderivative(x + t) - pi0_antiderivative(x - t));
}

std::vector<double> stationary_states(const std::function<double(double)>& F, double lo,
                                      double hi, int scan_points) {
    if (!F) throw ConfigError("stationary_states: missing nonlinearity");
    if (!(hi > lo) || scan_points < 2) throw ConfigError("stationary_states: bad scan range");
    std::vector<double> roots;
    double prev_x = lo, prev_f = F(lo);
    if (prev_f == 0.0) roots.push_back(lo);
    for (int i = 1; i <= scan_points; ++i) {
        double x = lo + (hi - lo) * i / double(scan_points);
        double f = F(x);
        if (f == 0.0) {
            roots.push_back(x);
        } else if (prev_f * f < 0.0) {
            double a = prev_x, b = x, fa = prev_f;
            for (int it = 0; it < 100; ++it) {
                double m = 0.5 * (a + b), fm = F(m);
                if (fm == 0.0) {
                    a = b = m;
                    break;
                }
                if (fa * fm < 0.0) {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_f = f;
    }
    return roots;
}

FieldState constant_state(const Grid1D& grid, double value) {
    FieldState s = FieldState::zero(grid, FieldKind::Real);
    for (int k = 0; k < grid.n_points; ++k) s.psi_re(k) = value;
    return s;
}

} // namespace slab
