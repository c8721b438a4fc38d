#pragma once

#include "slab/grid.hpp"

#include <vector>

namespace slab {

/** H = -d^2/dx^2 + offset + V(x) with Dirichlet walls, discretized by the
 *  standard second-order stencil on the grid. */
struct SchrodingerOperator1D {
    Grid1D grid;
    std::vector<double> V;
    double offset = 0.0;

    /** True when |V| has decayed at the grid ends (trustworthy spectrum). */
    bool edge_decayed(double rel = 1e-6) const;
};

struct SpectrumResult {
    std::vector<double> eigenvalues;              // sorted, below the requested threshold minus margin
    std::vector<std::vector<double>> eigenvectors; // normalized, filled on request
    double margin = 0.0;                          // continuum-edge margin 10*dx^2
    bool edge_warning = false;                    // potential not decayed at the ends
};

/** All discrete eigenvalues below (below - margin), by Sturm-sequence bisection
 *  on the symmetric tridiagonal matrix; eigenvectors by inverse iteration. */
SpectrumResult discrete_spectrum(const SchrodingerOperator1D& op, double below,
                                 bool want_vectors = false);

/** Linearization of the Ginzburg-Landau equation at the static kink:
 *  offset 2, V(x) = 3 S^2(x) - 3 = -3 sech^2(x/sqrt(2)). */
SchrodingerOperator1D kink_linearization(const Grid1D& grid);

/** Group velocity of the Klein-Gordon band: k / sqrt(k^2 + m^2). */
double group_velocity(double k, double mass2);

struct WienerResult {
    double min_modulus = 0.0;
    double argmin_k = 0.0;
};

/** min |rho-hat(k)| over [k_lo, k_hi], rho-hat(k) = int e^{ikx} rho(x) dx. */
WienerResult wiener_check(const std::vector<double>& rho, const Grid1D& grid, double k_lo,
                          double k_hi, int k_samples = 2048);

} // namespace slab
