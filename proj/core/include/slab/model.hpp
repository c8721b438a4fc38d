#pragma once

#include "slab/grid.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace slab {

/** Nonlinear term of the wave equation, F(psi) = -U'(psi).
 *
 *  Every variant has the U(1)-equivariant form F(psi) = f(|psi|^2) * psi, so
 *  eval_F(e^{i theta} psi) = e^{i theta} eval_F(psi) holds exactly in floating
 *  point. Variants:
 *    Linear:         U = 0,                     F = 0
 *    GinzburgLandau: U = |psi|^4/4 - |psi|^2/2 + 1/4,  F = psi - |psi|^2 psi
 *    Polynomial:     U = a|psi|^{2m} - b|psi|^{2n},
 *                    F = -2am|psi|^{2m-2} psi + 2bn|psi|^{2n-2} psi
 *    Cubic:          U = sign |psi|^4/4,        F = -sign |psi|^2 psi
 */
inline double ipow(double base, int e) {
    double r = 1.0;
    while (e-- > 0) r *= base;
    return r;
}

struct Nonlinearity {
    enum class Kind { Linear, GinzburgLandau, Polynomial, Cubic };

    Kind kind = Kind::Linear;
    double a = 0.0, b = 0.0;
    int m = 0, n = 0;
    double sign = 1.0;

    static Nonlinearity linear() { return {}; }

    static Nonlinearity ginzburg_landau() {
        Nonlinearity nl;
        nl.kind = Kind::GinzburgLandau;
        return nl;
    }

    static Nonlinearity polynomial(double a, int m, double b, int n) {
        if (!(m > n && n >= 2)) throw std::invalid_argument("Polynomial: need m > n >= 2");
        if (!(a > 0 && b > 0)) throw std::invalid_argument("Polynomial: need a, b > 0");
        Nonlinearity nl;
        nl.kind = Kind::Polynomial;
        nl.a = a;
        nl.m = m;
        nl.b = b;
        nl.n = n;
        return nl;
    }

    static Nonlinearity cubic(double sign) {
        Nonlinearity nl;
        nl.kind = Kind::Cubic;
        nl.sign = sign;
        return nl;
    }

    /** Table presets row1..row3 of the polynomial family. */
    static Nonlinearity row(int index);

    /** U as a function of the field amplitude |psi|. */
    double U(double amp) const {
        double s2 = amp * amp;
        switch (kind) {
            case Kind::Linear: return 0.0;
            case Kind::GinzburgLandau: {
                double d = s2 - 1.0;
                return 0.25 * d * d;
            }
            case Kind::Polynomial:
                return a * ipow(s2, m) - b * ipow(s2, n);
            case Kind::Cubic:
                return sign * 0.25 * s2 * s2;
        }
        return 0.0;
    }

    /** F(psi)/psi as a function of |psi|^2; multiply by psi to get F. */
    double F_factor(double amp2) const {
        switch (kind) {
            case Kind::Linear: return 0.0;
            case Kind::GinzburgLandau: return 1.0 - amp2;
            case Kind::Polynomial:
                return -2.0 * a * m * ipow(amp2, m - 1) + 2.0 * b * n * ipow(amp2, n - 1);
            case Kind::Cubic: return -sign * amp2;
        }
        return 0.0;
    }

    std::string name() const;
};

inline double eval_U(const Nonlinearity& nl, double psi_abs) { return nl.U(psi_abs); }

inline double eval_F(const Nonlinearity& nl, double psi) { return nl.F_factor(psi * psi) * psi; }

inline std::complex<double> eval_F(const Nonlinearity& nl, std::complex<double> psi) {
    return nl.F_factor(std::norm(psi)) * psi;
}

/** External potential V(x) entering as -V(x) psi in the force. */
struct ExternalPotential {
    enum class Kind { Zero, Cosine, Tabulated };

    Kind kind = Kind::Zero;
    double amplitude = 0.0;  // Cosine: V(x) = amplitude * cos(wavenumber * x)
    double wavenumber = 0.0;
    std::vector<double> samples; // Tabulated, on [x0, x0 + (N-1) dx_tab]
    double x0 = 0.0, dx_tab = 0.0;

    static ExternalPotential zero() { return {}; }

    static ExternalPotential cosine(double amplitude, double wavenumber) {
        ExternalPotential v;
        v.kind = Kind::Cosine;
        v.amplitude = amplitude;
        v.wavenumber = wavenumber;
        return v;
    }

    static ExternalPotential tabulated(std::vector<double> samples, double x0, double dx_tab) {
        if (samples.size() < 2) throw std::invalid_argument("tabulated potential: need >= 2 samples");
        ExternalPotential v;
        v.kind = Kind::Tabulated;
        v.samples = std::move(samples);
        v.x0 = x0;
        v.dx_tab = dx_tab;
        return v;
    }

    bool is_zero() const { return kind == Kind::Zero; }

    double operator()(double x) const {
        switch (kind) {
            case Kind::Zero: return 0.0;
            case Kind::Cosine: return amplitude * std::cos(wavenumber * x);
            case Kind::Tabulated: {
                // piecewise linear, clamped to the end samples
                double u = (x - x0) / dx_tab;
                if (u <= 0.0) return samples.front();
                size_t i = static_cast<size_t>(u);
                if (i + 1 >= samples.size()) return samples.back();
                double w = u - static_cast<double>(i);
                return samples[i] * (1.0 - w) + samples[i + 1] * w;
            }
        }
        return 0.0;
    }

    /** d/dx by closed form (Cosine) or central differences (Tabulated). */
    double derivative(double x) const {
        switch (kind) {
            case Kind::Zero: return 0.0;
            case Kind::Cosine: return -amplitude * wavenumber * std::sin(wavenumber * x);
            case Kind::Tabulated: {
                double h = dx_tab;
                return ((*this)(x + h) - (*this)(x - h)) / (2.0 * h);
            }
        }
        return 0.0;
    }
};

/** Full PDE specification:  psi-dd = psi'' - mass2*psi + F(psi) - V(x)*psi. */
struct ModelSpec {
    double mass2 = 0.0;
    Nonlinearity nonlinearity;
    ExternalPotential external;
    FieldKind field_kind = FieldKind::Real;

    /** psi-dd = psi'' + psi - psi^3, real field, no external potential. */
    static ModelSpec ginzburg_landau() {
        ModelSpec m;
        m.mass2 = 0.0;
        m.nonlinearity = Nonlinearity::ginzburg_landau();
        m.field_kind = FieldKind::Real;
        return m;
    }

    /** psi-dd = psi'' - psi + F(psi) - V psi with the polynomial family. */
    static ModelSpec polynomial(const Nonlinearity& nl, ExternalPotential v = {},
                                FieldKind kind = FieldKind::Complex) {
        ModelSpec m;
        m.mass2 = 1.0;
        m.nonlinearity = nl;
        m.external = std::move(v);
        m.field_kind = kind;
        return m;
    }

    /** Free Klein-Gordon with m^2 = mass2 (dispersion tests). */
    static ModelSpec linear_kg(double mass2, FieldKind kind = FieldKind::Real) {
        ModelSpec m;
        m.mass2 = mass2;
        m.field_kind = kind;
        return m;
    }
};

enum class BoundaryTreatment { ClampEnds, Periodic };

/** Right-hand side psi'' - m^2 psi + F(psi) - V psi with centered second
 *  differences, laid out like state.psi. ClampEnds writes zero force at the
 *  end nodes (Dirichlet rows); Periodic wraps node n to node 0. */
std::vector<double> force_field(const ModelSpec& model, const FieldState& state,
                                BoundaryTreatment boundary = BoundaryTreatment::ClampEnds);

/** V sampled on a grid (empty vector for the Zero potential). */
std::vector<double> sample_potential(const ExternalPotential& v, const Grid1D& grid);

} // namespace slab
