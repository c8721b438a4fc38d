#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace slab {

/** Uniform 1D grid. Node k sits at x_min + k*dx; the last stored node is x_max.
 *  In periodic runs node n_points wraps to node 0, so the circumference is
 *  n_points*dx, not x_max - x_min. */
struct Grid1D {
    double x_min = 0.0;
    double x_max = 0.0;
    int n_points = 0;
    double dx = 0.0;

    static Grid1D make(double x_min, double x_max, int n_points) {
        if (n_points < 3) throw std::invalid_argument("Grid1D: n_points must be >= 3");
        if (!(x_max > x_min)) throw std::invalid_argument("Grid1D: x_max must exceed x_min");
        Grid1D g;
        g.x_min = x_min;
        g.x_max = x_max;
        g.n_points = n_points;
        g.dx = (x_max - x_min) / (n_points - 1);
        return g;
    }

    /** Grid covering [x_min, x_max] with spacing as close to dx_target as the
     *  endpoint constraint allows. */
    static Grid1D with_spacing(double x_min, double x_max, double dx_target) {
        int n = static_cast<int>((x_max - x_min) / dx_target + 0.5) + 1;
        return make(x_min, x_max, n);
    }

    double x(int k) const { return x_min + k * dx; }

    int nearest_node(double xq) const {
        int k = static_cast<int>((xq - x_min) / dx + 0.5);
        if (k < 0) k = 0;
        if (k >= n_points) k = n_points - 1;
        return k;
    }

    bool same_as(const Grid1D& o) const {
        return n_points == o.n_points && x_min == o.x_min && x_max == o.x_max;
    }
};

enum class FieldKind { Real, Complex };

/** Field snapshot: psi and conjugate momentum pi = psi-dot on a grid.
 *  Real kind stores one double per node; Complex stores interleaved (re, im)
 *  pairs. The real kind is a genuine fast path, not zero-imaginary complex. */
struct FieldState {
    Grid1D grid;
    FieldKind kind = FieldKind::Real;
    double time = 0.0;
    std::vector<double> psi;
    std::vector<double> pi;

    static FieldState zero(const Grid1D& g, FieldKind kind) {
        FieldState s;
        s.grid = g;
        s.kind = kind;
        size_t len = static_cast<size_t>(g.n_points) * (kind == FieldKind::Complex ? 2 : 1);
        s.psi.assign(len, 0.0);
        s.pi.assign(len, 0.0);
        return s;
    }

    int n() const { return grid.n_points; }
    int stride() const { return kind == FieldKind::Complex ? 2 : 1; }

    double psi_re(int k) const { return psi[static_cast<size_t>(k) * stride()]; }
    double psi_im(int k) const { return kind == FieldKind::Complex ? psi[2 * static_cast<size_t>(k) + 1] : 0.0; }
    double pi_re(int k) const { return pi[static_cast<size_t>(k) * stride()]; }
    double pi_im(int k) const { return kind == FieldKind::Complex ? pi[2 * static_cast<size_t>(k) + 1] : 0.0; }

    double& psi_re(int k) { return psi[static_cast<size_t>(k) * stride()]; }
    double& pi_re(int k) { return pi[static_cast<size_t>(k) * stride()]; }
    double& psi_im(int k) {
        if (kind != FieldKind::Complex) throw std::logic_error("psi_im on real field");
        return psi[2 * static_cast<size_t>(k) + 1];
    }
    double& pi_im(int k) {
        if (kind != FieldKind::Complex) throw std::logic_error("pi_im on real field");
        return pi[2 * static_cast<size_t>(k) + 1];
    }

    double abs_psi(int k) const {
        double re = psi_re(k);
        if (kind == FieldKind::Real) return re < 0 ? -re : re;
        double im = psi_im(k);
        return std::sqrt(re * re + im * im);
    }
};

struct EnergySnapshot {
    double kinetic = 0.0;   // 1/2 |pi|^2
    double gradient = 0.0;  // 1/2 |psi'|^2
    double potential = 0.0; // U(psi) + (m^2/2)|psi|^2
    double external = 0.0;  // 1/2 V(x) |psi|^2
    double total = 0.0;
};

struct ModelSpec; // models.hpp

EnergySnapshot energy(const FieldState& state, const ModelSpec& model);

/** Field momentum P = -Re \int conj(pi) d_x psi dx. Sign convention: a
 *  right-moving structure carries P of the same sign as its velocity. */
double momentum(const FieldState& state);

/** U(1) charge Q = Im \int conj(psi) pi dx. Complex fields only. */
double charge(const FieldState& state);

/** L2 distance of psi restricted to |x| < R. */
double local_l2_distance(const FieldState& a, const FieldState& b, double R);

} // namespace slab
