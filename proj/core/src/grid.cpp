#include "slab/grid.hpp"
#include "slab/model.hpp"

#include <cmath>

namespace slab {

namespace {

// trapezoid weight: half at non-periodic ends
inline double trap_w(int k, int n, double dx) {
    return (k == 0 || k == n - 1) ? 0.5 * dx : dx;
}

} // namespace

EnergySnapshot energy(const FieldState& state, const ModelSpec& model) {
    if ((model.field_kind == FieldKind::Complex) != (state.kind == FieldKind::Complex))
        throw std::invalid_argument("energy: field kind mismatch between state and model");
    const int n = state.n();
    const double dx = state.grid.dx;
    const auto& nl = model.nonlinearity;
    const bool has_v = !model.external.is_zero();

    EnergySnapshot e;
    for (int k = 0; k < n; ++k) {
        double w = trap_w(k, n, dx);
        double pr = state.pi_re(k), pi_ = state.pi_im(k);
        e.kinetic += w * 0.5 * (pr * pr + pi_ * pi_);

        // centered gradient, one-sided at the ends
        int kl = k > 0 ? k - 1 : 0;
        int kr = k < n - 1 ? k + 1 : n - 1;
        double h = (kr - kl) * dx;
        double gr = (state.psi_re(kr) - state.psi_re(kl)) / h;
        double gi = (state.psi_im(kr) - state.psi_im(kl)) / h;
        e.gradient += w * 0.5 * (gr * gr + gi * gi);

        double amp2 = state.psi_re(k) * state.psi_re(k) + state.psi_im(k) * state.psi_im(k);
        e.potential += w * (nl.U(std::sqrt(amp2)) + 0.5 * model.mass2 * amp2);
        if (has_v) e.external += w * 0.5 * model.external(state.grid.x(k)) * amp2;
    }
    e.total = e.kinetic + e.gradient + e.potential + e.external;
    return e;
}

double momentum(const FieldState& state) {
    const int n = state.n();
    const double dx = state.grid.dx;
    double p = 0.0;
    for (int k = 0; k < n; ++k) {
        int kl = k > 0 ? k - 1 : 0;
        int kr = k < n - 1 ? k + 1 : n - 1;
        double h = (kr - kl) * dx;
        double gr = (state.psi_re(kr) - state.psi_re(kl)) / h;
        double gi = (state.psi_im(kr) - state.psi_im(kl)) / h;
        // -Re(conj(pi) * dpsi)
        p -= trap_w(k, n, dx) * (state.pi_re(k) * gr + state.pi_im(k) * gi);
    }
    return p;
}

double charge(const FieldState& state) {
    if (state.kind != FieldKind::Complex)
        throw std::invalid_argument("charge: defined for complex fields only");
    const int n = state.n();
    const double dx = state.grid.dx;
    double q = 0.0;
    for (int k = 0; k < n; ++k) {
        // Im(conj(psi) * pi) = psi_re*pi_im - psi_im*pi_re
        q += trap_w(k, n, dx) * (state.psi_re(k) * state.pi_im(k) - state.psi_im(k) * state.pi_re(k));
    }
    return q;
}

double local_l2_distance(const FieldState& a, const FieldState& b, double R) {
    if (!a.grid.same_as(b.grid)) throw std::invalid_argument("local_l2_distance: grid mismatch");
    if (R > std::min(-a.grid.x_min, a.grid.x_max))
        throw std::invalid_argument("local_l2_distance: R exceeds the domain");
    const int n = a.n();
    const double dx = a.grid.dx;
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
        double x = a.grid.x(k);
        if (x <= -R || x >= R) continue;
        double dr = a.psi_re(k) - b.psi_re(k);
        double di = a.psi_im(k) - b.psi_im(k);
        acc += dx * (dr * dr + di * di);
    }
    return std::sqrt(acc);
}

} // namespace slab
