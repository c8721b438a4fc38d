#include "slab/profile.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>

namespace slab {

namespace {
const double SQRT2 = std::sqrt(2.0);
}

double kink_value(const KinkSpec& spec, double x, double t) {
    double arg = spec.gamma() * (spec.reflection * x - spec.a - spec.v * t) / SQRT2;
    return spec.orientation * std::tanh(arg);
}

double kink_time_derivative(const KinkSpec& spec, double x, double t) {
    double arg = spec.gamma() * (spec.reflection * x - spec.a - spec.v * t) / SQRT2;
    double sech = 1.0 / std::cosh(arg);
    return spec.orientation * sech * sech * spec.gamma() * (-spec.v) / SQRT2;
}

FieldState kink_state(const KinkSpec& spec, const Grid1D& grid, double t) {
    FieldState s = FieldState::zero(grid, FieldKind::Real);
    s.time = t;
    for (int k = 0; k < grid.n_points; ++k) {
        double x = grid.x(k);
        s.psi[static_cast<size_t>(k)] = kink_value(spec, x, t);
        s.pi[static_cast<size_t>(k)] = kink_time_derivative(spec, x, t);
    }
    return s;
}

double kink_mode_shape(double y) {
    double u = y / std::sqrt(2.0);
    return 2.0 * std::tanh(u) / std::cosh(u);
}

FieldState kink_with_mode(const KinkSpec& spec, double mode_amplitude, double mode_phase,
                          const Grid1D& grid, double t) {
    const double g = spec.gamma();
    const double v = spec.v;
    const double w2 = kink_mode_frequency();
    const double s2 = std::sqrt(2.0);
    FieldState s = FieldState::zero(grid, FieldKind::Real);
    s.time = t;
    for (int k = 0; k < grid.n_points; ++k) {
        double u = spec.reflection * grid.x(k) - spec.a;
        double y = g * (u - v * t);    // rest-frame position
        double tau = g * (t - v * u);  // rest-frame time
        double phase = w2 * tau + mode_phase;
        double sech = 1.0 / std::cosh(y / s2);
        double Sp = sech * sech / s2; // d/dy tanh(y/sqrt 2)
        double chi = kink_mode_shape(y);
        double chi_p = s2 * sech * (sech * sech - std::tanh(y / s2) * std::tanh(y / s2));
        double a = mode_amplitude;
        s.psi[static_cast<size_t>(k)] = spec.orientation * std::tanh(y / s2) + a * chi * std::cos(phase);
        // d/dt of the transformed rest solution: dy/dt = -gamma v, dtau/dt = gamma
        s.pi[static_cast<size_t>(k)] =
            -g * v * (spec.orientation * Sp + a * chi_p * std::cos(phase)) -
            g * a * w2 * chi * std::sin(phase);
    }
    return s;
}

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1]
const double GL_X[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                        -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                        0.7966664774136267,  0.9602898564975363};
const double GL_W[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                        0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                        0.2223810344533745, 0.1012285362903763};

template <class F>
double gauss8(F&& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a), acc = 0.0;
    for (int i = 0; i < 8; ++i) acc += GL_W[i] * f(c + h * GL_X[i]);
    return acc * h;
}

struct FirstIntegral {
    const Nonlinearity& nl;
    double kappa2; // m^2 - omega^2

    // Deflated form W = u (u - u_star) q(u), u = phi^2, installed once the
    // root is bracketed: the raw polynomial near its root cancels ~8 digits,
    // which would show up as per-sample noise in the quadrature.
    bool deflated = false;
    double u_star = 0.0;
    std::vector<double> qc; // q coefficients, qc[i] u^i

    double W_raw(double p) const { return nl.U(p) + 0.5 * kappa2 * p * p; }

    double W(double p) const {
        if (!deflated) return W_raw(p);
        double u = p * p;
        double q = 0.0;
        for (std::size_t i = qc.size(); i-- > 0;) q = q * u + qc[i];
        return u * (u - u_star) * q;
    }

    /** Divide g(u) = W_raw/u by (u - peak^2); the dropped remainder is the
     *  roundoff-size value of g at the bisected root. */
    void deflate(double peak) {
        std::vector<double> c; // g coefficients, c[i] u^i
        if (nl.kind == Nonlinearity::Kind::Polynomial) {
            c.assign(static_cast<std::size_t>(nl.m), 0.0);
            c[static_cast<std::size_t>(nl.m - 1)] += nl.a;
            c[static_cast<std::size_t>(nl.n - 1)] -= nl.b;
            c[0] += 0.5 * kappa2;
        } else if (nl.kind == Nonlinearity::Kind::Cubic) {
            c = {0.5 * kappa2, 0.25 * nl.sign};
        } else {
            return; // other kinds have no positive W root
        }
        u_star = peak * peak;
        std::size_t deg = c.size() - 1;
        qc.assign(deg, 0.0);
        double carry = c[deg];
        for (std::size_t i = deg; i-- > 0;) {
            qc[i] = carry;
            carry = c[i] + u_star * carry;
        }
        deflated = true;
    }

    double Wprime(double p) const { return kappa2 * p - nl.F_factor(p * p) * p; }
    // integrand of x(phi) away from the peak
    double inv_speed(double p) const { return 1.0 / std::sqrt(2.0 * std::max(W(p), 0.0)); }
};

} // namespace

double SolitaryWaveProfile::operator()(double xq) const {
    double ax = std::abs(xq);
    double xc = x_cut();
    if (ax >= xc) {
        // exponential tail matched at the last sample
        return phi.back() * std::exp(-decay_rate * (ax - xc));
    }
    double u = ax / dx_samples;
    size_t j = static_cast<size_t>(u);
    double t = u - static_cast<double>(j);
    size_t N = phi.size();
    if (j + 1 >= N) return phi.back();
    if (j == 0 || j + 2 >= N) {
        return phi[j] * (1.0 - t) + phi[j + 1] * t; // linear at the edges
    }
    // 4-point cubic (uniform Lagrange)
    double pm1 = phi[j - 1], p0 = phi[j], p1 = phi[j + 1], p2 = phi[j + 2];
    double a = -pm1 / 6.0 + p0 / 2.0 - p1 / 2.0 + p2 / 6.0;
    double b = pm1 / 2.0 - p0 + p1 / 2.0;
    double c = -pm1 / 3.0 - p0 / 2.0 + p1 - p2 / 6.0;
    return ((a * t + b) * t + c) * t + p0;
}

SolitaryWaveProfile solve_profile(const Nonlinearity& nl, double mass2, double omega, double tol) {
    double kappa2 = mass2 - omega * omega;
    if (!(kappa2 > 0.0)) throw ConfigError("solve_profile: need omega^2 < m^2");
    FirstIntegral fi{nl, kappa2, false, 0.0, {}};

    // bracket the smallest positive root of W
    double scan_max = 3.0;
    if (nl.kind == Nonlinearity::Kind::Polynomial)
        scan_max = 2.0 * std::pow(nl.b / nl.a, 1.0 / (2.0 * (nl.m - nl.n)));
    const int NSCAN = 8192;
    double lo = 0.0, hi = 0.0;
    double step_sz = scan_max / NSCAN;
    for (int i = 1; i <= NSCAN; ++i) {
        double p = i * step_sz;
        if (fi.W(p) <= 0.0) {
            lo = (i - 1) * step_sz;
            hi = p;
            break;
        }
    }
    if (hi == 0.0) throw ConfigError("solve_profile: no solitary wave at this omega (W has no positive root)");
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (fi.W(mid) > 0.0 ? lo : hi) = mid;
    }
    const double peak = 0.5 * (lo + hi);
    double Wp_peak = fi.Wprime(peak);
    if (!(Wp_peak < -1e-12)) throw ConfigError("solve_profile: degenerate turning point (multi-bump profile rejected)");
    fi.deflate(peak);

    const double kappa = std::sqrt(kappa2);

    // x(phi) in two zones. Near the peak the integrand 1/sqrt(2W) has a
    // square-root singularity, so substitute s = sqrt(peak - phi) (smooth
    // integrand) and integrate on composite panels down to phi_b = peak/2;
    // below phi_b a geometric ladder of phi rungs handles the log tail.
    auto peak_panel = [&](double s) { // ds-integrand, smooth at s = 0
        double p = peak - s * s;
        double w = fi.W(p);
        if (w <= 0.0) w = -Wp_peak * s * s; // series fallback at roundoff scale
        return 2.0 * s / std::sqrt(2.0 * w);
    };
    const double phi_b = 0.5 * peak;
    const int NPANEL = 16;
    const double s_b = std::sqrt(peak - phi_b);
    const double ds = s_b / NPANEL;
    double cum[NPANEL + 1];
    cum[0] = 0.0;
    for (int i = 0; i < NPANEL; ++i) cum[i + 1] = cum[i] + gauss8(peak_panel, i * ds, (i + 1) * ds);
    auto x_of_s = [&](double s) { // x as a function of s in [0, s_b]
        int full = std::min(static_cast<int>(s / ds), NPANEL);
        return cum[full] + gauss8(peak_panel, full * ds, s);
    };
    auto x_peak_zone = [&](double p) { // valid for p in [phi_b, peak]
        return x_of_s(std::sqrt(std::max(peak - p, 0.0)));
    };

    std::vector<double> lad_phi, lad_x;
    lad_phi.push_back(phi_b);
    lad_x.push_back(cum[NPANEL]);
    const double phi_tail = 1e-10 * peak;
    const double ratio = 0.995;
    double p_cur = phi_b;
    while (p_cur > phi_tail) {
        double p_next = std::max(p_cur * ratio, phi_tail);
        double seg = gauss8([&](double p) { return fi.inv_speed(p); }, p_next, p_cur);
        lad_x.push_back(lad_x.back() + seg);
        lad_phi.push_back(p_next);
        if (p_next == phi_tail) break;
        p_cur = p_next;
    }

    // x at a given phi on the ladder (exact quadrature refinement of a rung)
    auto x_of_phi = [&](double p) {
        if (p >= phi_b) return x_peak_zone(p);
        auto it = std::upper_bound(lad_phi.begin(), lad_phi.end(), p, std::greater<double>());
        size_t j = static_cast<size_t>(it - lad_phi.begin()) - 1; // lad_phi[j] > p >= lad_phi[j+1]
        return lad_x[j] + gauss8([&](double q) { return fi.inv_speed(q); }, p, lad_phi[j]);
    };

    // invert to phi(x): safeguarded Newton, in the s coordinate near the peak
    // (where dx/ds = peak_panel > 0 is regular) and in phi on the ladder rungs
    auto phi_of_x = [&](double xq) {
        if (xq <= 0.0) return peak;
        if (xq >= lad_x.back()) return lad_phi.back();
        if (xq <= lad_x.front()) {
            double sa = 0.0, sb = s_b;
            double s = std::min(s_b, xq / peak_panel(0.0));
            for (int iter = 0; iter < 80; ++iter) {
                double err = x_of_s(s) - xq;
                if (std::abs(err) < 1e-15 * (1.0 + xq)) break;
                (err > 0.0 ? sb : sa) = s; // x increases with s
                double s_new = s - err / peak_panel(s);
                if (!(s_new > sa && s_new < sb)) s_new = 0.5 * (sa + sb);
                if (sb - sa < 1e-16 * s_b) { s = s_new; break; }
                s = s_new;
            }
            return peak - s * s;
        }
        auto it = std::upper_bound(lad_x.begin(), lad_x.end(), xq);
        size_t j = static_cast<size_t>(it - lad_x.begin()); // lad_x[j-1] <= xq < lad_x[j]
        double a = lad_phi[j], b = lad_phi[j - 1];          // phi decreasing in x
        double p = 0.5 * (a + b);
        for (int iter = 0; iter < 80; ++iter) {
            double err = x_of_phi(p) - xq;
            if (std::abs(err) < 1e-15 * (1.0 + xq)) break;
            (err > 0.0 ? a : b) = p; // x(p) too large means p below the solution
            double p_new = p + err * std::sqrt(2.0 * std::max(fi.W(p), 1e-300));
            if (!(p_new > a && p_new < b)) p_new = 0.5 * (a + b);
            if (b - a < 1e-16 * peak) { p = p_new; break; }
            p = p_new;
        }
        return p;
    };

    SolitaryWaveProfile prof;
    prof.omega = omega;
    prof.mass2 = mass2;
    prof.nonlinearity = nl;
    prof.peak_amplitude = peak;
    prof.decay_rate = kappa;
    prof.half_amplitude_width = 2.0 * x_of_phi(0.5 * peak);

    // sample spacing balancing stencil truncation against roundoff in the
    // residual; the 6th-derivative scale is set by the tail rate kappa or by
    // the curvature at the peak, whichever is stiffer
    double h_pk = 1e-5 * peak;
    double wpp = std::abs(fi.Wprime(peak + h_pk) - fi.Wprime(peak - h_pk)) / (2.0 * h_pk);
    double kp6 = std::max({ipow(kappa, 6) * peak, wpp * wpp * wpp * peak, 1e-2});
    double dxs = std::pow(3.0 * tol / kp6, 0.25);
    dxs = std::min(0.05, std::max(2e-3, dxs));
    double x_end = lad_x.back();

    auto sample_and_check = [&](double h) {
        int nsamp = static_cast<int>(x_end / h) + 1;
        prof.dx_samples = h;
        prof.x.resize(static_cast<size_t>(nsamp));
        prof.phi.resize(static_cast<size_t>(nsamp));
        for (int k = 0; k < nsamp; ++k) {
            double xk = k * h;
            prof.x[static_cast<size_t>(k)] = xk;
            prof.phi[static_cast<size_t>(k)] = phi_of_x(xk);
        }
        // 4th-order 5-point residual of phi'' = W'(phi) on the samples
        double res = 0.0;
        for (int k = 2; k + 2 < nsamp; ++k) {
            size_t i = static_cast<size_t>(k);
            double d2 = (-prof.phi[i - 2] + 16.0 * prof.phi[i - 1] - 30.0 * prof.phi[i] +
                         16.0 * prof.phi[i + 1] - prof.phi[i + 2]) /
                        (12.0 * h * h);
            res = std::max(res, std::abs(d2 - fi.Wprime(prof.phi[i])));
        }
        prof.residual_sup = res;
        return res;
    };

    // refine when the a-priori spacing was too optimistic about phi^(6)
    double res = sample_and_check(dxs);
    while (res > 10.0 * tol && dxs > 2e-3 * 1.001) {
        dxs = std::max(2e-3, 0.5 * dxs);
        res = sample_and_check(dxs);
    }
    if (res > 10.0 * tol) {
        char buf[64];
#ifdef SLAB_PROFILE_DEBUG
        for (int k = 2; k + 2 < (int)prof.x.size(); ++k) {
            size_t i = (size_t)k;
            double d2 = (-prof.phi[i-2] + 16*prof.phi[i-1] - 30*prof.phi[i] + 16*prof.phi[i+1] - prof.phi[i+2]) / (12*dxs*dxs);
            double r = std::abs(d2 - fi.Wprime(prof.phi[i]));
            if (r > 0.5 * res)
                std::fprintf(stderr, "DBG x=%.6f phi=%.16g res=%.3e zone=%s\n", prof.x[i], prof.phi[i], r,
                             prof.x[i] <= lad_x.front() ? "s" : "ladder");
        }
        std::fprintf(stderr, "DBG lad_x.front=%.6f\n", lad_x.front());
#endif
        std::snprintf(buf, sizeof buf, "%.3e at dx %.3e", res, dxs);
        throw ConfigError(std::string("solve_profile: residual above tolerance (") + buf + ")");
    }
    return prof;
}

BoostSample boost_sample(const SolitaryWaveProfile& profile, double gamma, double v, double theta,
                         double x_rel) {
    const double hd = 1e-6; // derivative of the sampled profile
    double w = profile.omega;
    double xi = gamma * x_rel;
    double ph = profile(xi);
    double dph = (profile(xi + hd) - profile(xi - hd)) / (2.0 * hd);
    double phase = theta + w * gamma * v * x_rel;
    double c = std::cos(phase), sn = std::sin(phase);
    // psi = e^{i phase} phi;  pi = e^{i phase} (-gamma v phi' - i omega gamma phi)
    double ar = -gamma * v * dph;
    double ai = -w * gamma * ph;
    return {ph * c, ph * sn, ar * c - ai * sn, ar * sn + ai * c};
}

FieldState moving_soliton(const SolitaryWaveProfile& profile, double v, double q, double theta,
                          const Grid1D& grid) {
    if (!(std::abs(v) < 1.0)) throw ConfigError("moving_soliton: need |v| < 1");
    if (profile.x_cut() <= 0.0) throw ConfigError("moving_soliton: empty profile");
    double gamma = 1.0 / std::sqrt(1.0 - v * v);

    FieldState s = FieldState::zero(grid, FieldKind::Complex);
    for (int k = 0; k < grid.n_points; ++k) {
        BoostSample b = boost_sample(profile, gamma, v, theta, grid.x(k) - q);
        s.psi_re(k) = b.psi_re;
        s.psi_im(k) = b.psi_im;
        s.pi_re(k) = b.pi_re;
        s.pi_im(k) = b.pi_im;
    }
    return s;
}

} // namespace slab
