#pragma once

#include "slab/errors.hpp"
#include "slab/grid.hpp"
#include "slab/model.hpp"

#include <cmath>
#include <vector>

namespace slab {

/** Exact kink of the Ginzburg-Landau wave equation:
 *  psi(x,t) = orientation * S(gamma (reflection*x - a - v t)),  S(y) = tanh(y/sqrt(2)). */
struct KinkSpec {
    int orientation = +1;
    int reflection = +1;
    double a = 0.0;
    double v = 0.0;

    double gamma() const {
        if (!(std::abs(v) < 1.0)) throw ConfigError("kink: need |v| < 1");
        return 1.0 / std::sqrt(1.0 - v * v);
    }
};

double kink_value(const KinkSpec& spec, double x, double t);
double kink_time_derivative(const KinkSpec& spec, double x, double t);
FieldState kink_state(const KinkSpec& spec, const Grid1D& grid, double t = 0.0);

/** Shape of the kink's single localized oscillation mode, normalized to sup = 1. */
double kink_mode_shape(double y);

/** Angular frequency of that mode in the kink's rest frame. */
inline double kink_mode_frequency() { return std::sqrt(1.5); }

/** Kink with its localized mode excited at amplitude `mode_amplitude`, boosted per `spec`.
 *  The excitation lives in the rest frame: psi_rest(y, tau) = o S(y) + a chi(y) cos(w2 tau + phase),
 *  and the lab state is its Lorentz transform, so a moving kink carries the
 *  time-dilated oscillation together with the matching spatial phase twist. */
FieldState kink_with_mode(const KinkSpec& spec, double mode_amplitude, double mode_phase,
                          const Grid1D& grid, double t = 0.0);

/** Solitary-wave amplitude phi_omega: even, positive, decreasing on x > 0,
 *  solving phi'' = (m^2 - omega^2) phi - F(phi). Samples cover x in [0, x_cut]
 *  uniformly; beyond x_cut the evaluation switches to the exponential tail. */
struct SolitaryWaveProfile {
    double omega = 0.0;
    double mass2 = 1.0;
    Nonlinearity nonlinearity;
    double peak_amplitude = 0.0;       // phi* = smallest positive root of the first-integral potential
    double decay_rate = 0.0;           // sqrt(m^2 - omega^2)
    double half_amplitude_width = 0.0; // full width at phi*/2
    double residual_sup = 0.0;         // 4th-order stencil residual of the stationary ODE on the samples
    std::vector<double> x;             // uniform, x[0] = 0
    std::vector<double> phi;
    double dx_samples = 0.0;

    /** Even evaluation with cubic interpolation inside [0, x_cut], exponential tail outside. */
    double operator()(double xq) const;

    double x_cut() const { return x.empty() ? 0.0 : x.back(); }
};

/** Quadrature solver for the solitary-wave profile via the first integral
 *  (1/2) phi'^2 = W(phi), W(phi) = U(phi) + (m^2 - omega^2) phi^2 / 2.
 *  Throws ConfigError when no positive root of W exists (no solitary wave). */
SolitaryWaveProfile solve_profile(const Nonlinearity& nl, double mass2, double omega,
                                  double tol = 1e-9);

/** One point of the boosted standing wave
 *  e^{i theta} phi(gamma(x-q)) e^{i omega gamma v (x-q)} at x_rel = x - q,
 *  with pi the exact time derivative of the moving solution at t = 0. */
struct BoostSample {
    double psi_re, psi_im, pi_re, pi_im;
};
BoostSample boost_sample(const SolitaryWaveProfile& profile, double gamma, double v, double theta,
                         double x_rel);

/** The boosted standing wave sampled on a grid. */
FieldState moving_soliton(const SolitaryWaveProfile& profile, double v, double q, double theta,
                          const Grid1D& grid);

} // namespace slab
