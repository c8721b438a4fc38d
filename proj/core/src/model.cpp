#include "slab/model.hpp"

#include <cmath>

namespace slab {

Nonlinearity Nonlinearity::row(int index) {
    switch (index) {
        case 1: return polynomial(1.0, 3, 0.61, 2);
        case 2: return polynomial(10.0, 4, 2.1, 2);
        case 3: return polynomial(10.0, 6, 8.75, 5);
    }
    throw std::invalid_argument("Nonlinearity::row: index must be 1, 2 or 3");
}

std::string Nonlinearity::name() const {
    switch (kind) {
        case Kind::Linear: return "linear";
        case Kind::GinzburgLandau: return "ginzburg_landau";
        case Kind::Polynomial:
            return "polynomial(a=" + std::to_string(a) + ",m=" + std::to_string(m) +
                   ",b=" + std::to_string(b) + ",n=" + std::to_string(n) + ")";
        case Kind::Cubic: return sign > 0 ? "cubic(+)" : "cubic(-)";
    }
    return "?";
}

std::vector<double> sample_potential(const ExternalPotential& v, const Grid1D& grid) {
    if (v.is_zero()) return {};
    std::vector<double> out(static_cast<size_t>(grid.n_points));
    for (int k = 0; k < grid.n_points; ++k) out[static_cast<size_t>(k)] = v(grid.x(k));
    return out;
}

std::vector<double> force_field(const ModelSpec& model, const FieldState& state,
                                BoundaryTreatment boundary) {
    const int n = state.n();
    const double inv_dx2 = 1.0 / (state.grid.dx * state.grid.dx);
    const auto& nl = model.nonlinearity;
    const bool has_v = !model.external.is_zero();
    std::vector<double> f(state.psi.size(), 0.0);

    auto node_force = [&](int k, int kl, int kr) {
        double vx = has_v ? model.external(state.grid.x(k)) : 0.0;
        if (state.kind == FieldKind::Real) {
            double p = state.psi[static_cast<size_t>(k)];
            double lap = (state.psi[static_cast<size_t>(kr)] - 2.0 * p + state.psi[static_cast<size_t>(kl)]) * inv_dx2;
            f[static_cast<size_t>(k)] = lap - model.mass2 * p + nl.F_factor(p * p) * p - vx * p;
        } else {
            size_t i = 2 * static_cast<size_t>(k), il = 2 * static_cast<size_t>(kl), ir = 2 * static_cast<size_t>(kr);
            double pr = state.psi[i], pim = state.psi[i + 1];
            double lr = (state.psi[ir] - 2.0 * pr + state.psi[il]) * inv_dx2;
            double li = (state.psi[ir + 1] - 2.0 * pim + state.psi[il + 1]) * inv_dx2;
            double ff = nl.F_factor(pr * pr + pim * pim);
            f[i] = lr - model.mass2 * pr + ff * pr - vx * pr;
            f[i + 1] = li - model.mass2 * pim + ff * pim - vx * pim;
        }
    };

    for (int k = 1; k < n - 1; ++k) node_force(k, k - 1, k + 1);
    if (boundary == BoundaryTreatment::Periodic) {
        node_force(0, n - 1, 1);            // node n wraps to node 0: left neighbour is n-1
        node_force(n - 1, n - 2, 0);
    }
    // ClampEnds: end rows stay zero (Dirichlet rows are overwritten by the integrator)
    return f;
}

} // namespace slab
