#pragma once

#include "slab/grid.hpp"
#include "slab/integrate.hpp"

#include <functional>
#include <vector>

namespace slab {

/** Massless string psi-dd = psi'' + f(x, psi) with either point couplings
 *  f = sum_k delta(x - x_k) F_k(psi(x_k)) or a distributed density
 *  f = chi(x) F(psi(x)). */
struct StringOscillatorModel {
    struct PointCoupling {
        double x = 0.0;
        std::function<double(double)> F;
    };
    std::vector<PointCoupling> couplings;

    // distributed alternative: chi sampled on the simulation grid
    std::vector<double> chi;
    std::function<double(double)> F_distributed;

    /** Spread each delta over the two nearest nodes with hat weights instead
     *  of putting weight 1/dx on the single nearest node. */
    bool two_node_hat = false;
};

/** Grid simulation of the coupled string; identical to integrate.run with the
 *  couplings applied as nodal forces (weight 1/dx at the nearest node, or the
 *  two-node hat). */
Trajectory simulate_string(const StringOscillatorModel& model, const FieldState& initial,
                           const IntegratorConfig& cfg, double t_end,
                           const std::vector<Probe>& probes = {}, bool keep_snapshots = true);

struct TraceOracle {
    std::vector<double> times, y;
    bool aborted = false; // stiff blow-up
    double abort_time = 0.0;
};

/** Reduced ODE for the trace y(t) = psi(x_c, t) of a single point coupling:
 *  2 y'(t) = F(y) + 4 * incoming(t). The incoming contribution is half the
 *  free-field velocity at the coupling point (see incoming_from_initial); the
 *  coefficient convention is frozen by the golden grid-vs-oracle test. */
TraceOracle trace_ode_oracle(const std::function<double(double)>& F, double y0,
                             const std::function<double(double)>& incoming, double dt,
                             double t_end);

/** incoming(t) = (1/2) d/dt [free d'Alembert evolution of (psi0, pi0)](x_c, t),
 *  from analytic initial data. */
std::function<double(double)> incoming_from_initial(std::function<double(double)> psi0_prime,
                                                    std::function<double(double)> pi0,
                                                    double x_c);

/** Free-string d'Alembert solution psi(x,t) = [psi0(x-t)+psi0(x+t)]/2
 *  + (1/2) int_{x-t}^{x+t} pi0. The integral of pi0 is passed as its
 *  antiderivative. */
double dalembert_value(const std::function<double(double)>& psi0,
                       const std::function<double(double)>& pi0_antiderivative, double x,
                       double t);

/** Constant finite-energy stationary states = zeros of F in [lo, hi],
 *  by scan plus bisection. */
std::vector<double> stationary_states(const std::function<double(double)>& F, double lo,
                                      double hi, int scan_points = 4096);

/** Constant state as a field (for local-distance comparisons). */
FieldState constant_state(const Grid1D& grid, double value);

} // namespace slab
