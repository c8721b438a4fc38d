#include "slab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace slab {

bool SchrodingerOperator1D::edge_decayed(double rel) const {
    double vmax = 0.0;
    for (double v : V) vmax = std::max(vmax, std::abs(v));
    if (vmax == 0.0) return true;
    double edge = std::max(std::abs(V.front()), std::abs(V.back()));
    return edge <= rel * vmax;
}

namespace {

// Number of eigenvalues of the tridiagonal matrix strictly below lambda
// (LDL^T sign count; off-diagonal is the constant -1/dx^2).
int sturm_count(const std::vector<double>& diag, double off2, double lambda) {
    int count = 0;
    double d = std::numeric_limits<double>::infinity(); // first pivot has no predecessor
    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    for (double dk : diag) {
        d = (dk - lambda) - off2 / d;
        if (std::abs(d) < tiny) d = (d < 0.0 ? -tiny : tiny);
        if (d < 0.0) ++count;
    }
    return count;
}

// One inverse-iteration eigenvector for eigenvalue lam (Thomas solve with
// row swaps for stability).
std::vector<double> inverse_iteration(const std::vector<double>& diag, double off, double lam,
                                      double dx) {
    const std::size_t n = diag.size();
    std::vector<double> x(n, 1.0 / std::sqrt(double(n)));
    double shift = lam + 1e-11 * (std::abs(lam) + 1.0); // keep the solve nonsingular
    for (int sweep = 0; sweep < 4; ++sweep) {
        // Gaussian elimination with partial pivoting on the tridiagonal
        // (H - shift); bandwidth grows to 2 above the diagonal.
        std::vector<double> a(n), b(n, off), c(n, 0.0), rhs = x;
        for (std::size_t k = 0; k < n; ++k) a[k] = diag[k] - shift;
        b[n - 1] = 0.0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            double sub = off;
            if (std::abs(sub) > std::abs(a[k])) {
                std::swap(a[k], sub);
                std::swap(b[k], a[k + 1]);
                std::swap(c[k], b[k + 1]);
                std::swap(rhs[k], rhs[k + 1]);
            }
            double m = sub / a[k];
            a[k + 1] -= m * b[k];
            b[k + 1] -= m * c[k];
            rhs[k + 1] -= m * rhs[k];
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = rhs[i];
            if (i + 1 < n) s -= b[i] * rhs[i + 1];
            if (i + 2 < n) s -= c[i] * rhs[i + 2];
            rhs[i] = s / a[i];
        }
        double norm2 = 0.0;
        for (double v : rhs) norm2 += v * v;
        double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] * inv;
    }
    // Normalize in L^2(dx) and fix the overall sign (largest entry positive).
    double scale = 1.0 / std::sqrt(dx);
    std::size_t imax = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
        if (std::abs(x[i]) > std::abs(x[imax])) imax = i;
    if (x[imax] < 0.0) scale = -scale;
    for (double& v : x) v *= scale;
    return x;
}

} // namespace

SpectrumResult discrete_spectrum(const SchrodingerOperator1D& op, double below,
                                 bool want_vectors) {
    const Grid1D& g = op.grid;
    if (op.V.size() != std::size_t(g.n_points)) throw std::invalid_argument("potential size != grid size");
    const double dx = g.dx;
    const double inv2 = 1.0 / (dx * dx);

    std::vector<double> diag(g.n_points);
    for (int k = 0; k < g.n_points; ++k) diag[k] = 2.0 * inv2 + op.offset + op.V[k];
    const double off = -inv2;
    const double off2 = off * off;

    SpectrumResult out;
    out.margin = 10.0 * dx * dx;
    out.edge_warning = !op.edge_decayed();
    const double cutoff = below - out.margin;

    double lo = diag[0];
    for (double dk : diag) lo = std::min(lo, dk);
    lo -= 2.0 * std::abs(off) + 1.0; // Gershgorin lower bound, padded

    int m = sturm_count(diag, off2, cutoff);
    for (int j = 0; j < m; ++j) {
        double a = lo, b = cutoff;
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (a + b);
            if (sturm_count(diag, off2, mid) <= j)
                a = mid;
            else
                b = mid;
        }
        out.eigenvalues.push_back(0.5 * (a + b));
    }
    if (want_vectors)
        for (double lam : out.eigenvalues)
            out.eigenvectors.push_back(inverse_iteration(diag, off, lam, dx));
    return out;
}

SchrodingerOperator1D kink_linearization(const Grid1D& grid) {
    SchrodingerOperator1D op;
    op.grid = grid;
    op.offset = 2.0;
    op.V.resize(grid.n_points);
    for (int k = 0; k < grid.n_points; ++k) {
        double s = std::tanh(grid.x(k) / std::sqrt(2.0));
        op.V[k] = 3.0 * s * s - 3.0;
    }
    return op;
}

double group_velocity(double k, double mass2) {
    return k / std::sqrt(k * k + mass2);
}

WienerResult wiener_check(const std::vector<double>& rho, const Grid1D& grid, double k_lo,
                          double k_hi, int k_samples) {
    if (rho.size() != std::size_t(grid.n_points)) throw std::invalid_argument("density size != grid size");
    if (k_samples < 2 || !(k_hi > k_lo)) throw std::invalid_argument("bad wiener band");
    WienerResult out;
    out.min_modulus = std::numeric_limits<double>::infinity();
    for (int j = 0; j < k_samples; ++j) {
        double k = k_lo + (k_hi - k_lo) * j / double(k_samples - 1);
        std::complex<double> acc = 0.0;
        for (int i = 0; i < grid.n_points; ++i) {
            double w = (i == 0 || i + 1 == grid.n_points) ? 0.5 : 1.0;
            acc += w * rho[i] * std::exp(std::complex<double>(0.0, k * grid.x(i)));
        }
        double mod = std::abs(acc) * grid.dx;
        if (mod < out.min_modulus) {
            out.min_modulus = mod;
            out.argmin_k = k;
        }
    }
    return out;
}

} // namespace slab
