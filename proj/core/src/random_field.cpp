#include "slab/random_field.hpp"

#include "slab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace slab {

namespace {

// mt19937_64 output mapped to [0,1) by hand: the engine's stream is pinned by
// the standard, so seeded data are bit-identical across platforms.
double u01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

struct Bump {
    double c, w, a; // center, width, signed amplitude
};

std::vector<Bump> draw_bumps(std::mt19937_64& rng, double lo, double hi, double smoothness) {
    int n = 8 + int(rng() % 5); // ~10 bumps
    std::vector<Bump> bumps;
    bumps.reserve(n);
    for (int i = 0; i < n; ++i) {
        Bump b;
        b.c = lo + (hi - lo) * u01(rng);
        b.w = smoothness * (0.5 + 1.5 * u01(rng));
        double sign = (rng() & 1) ? 1.0 : -1.0;
        b.a = sign * (0.3 + 0.7 * u01(rng));
        bumps.push_back(b);
    }
    return bumps;
}

double eval_bumps(const std::vector<Bump>& bumps, double x) {
    double v = 0.0;
    for (const Bump& b : bumps) {
        double z = (x - b.c) / b.w;
        v += b.a * std::exp(-0.5 * z * z);
    }
    return v;
}

// C^2 cutoff: quintic ramps of length 3*smoothness outside [lo, hi].
double window(double x, double lo, double hi, double ramp) {
    auto s5 = [](double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); };
    if (x <= lo - ramp || x >= hi + ramp) return 0.0;
    if (x < lo) return s5((x - (lo - ramp)) / ramp);
    if (x > hi) return s5(((hi + ramp) - x) / ramp);
    return 1.0;
}

std::vector<double> kink_positions(std::mt19937_64& rng, double lo, double hi, int count) {
    const double min_gap = 1.5;
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<double> p;
        for (int i = 0; i < count; ++i) p.push_back(lo + (hi - lo) * u01(rng));
        std::sort(p.begin(), p.end());
        bool ok = true;
        for (int i = 0; i + 1 < count; ++i)
            if (p[i + 1] - p[i] < min_gap) ok = false;
        if (ok) return p;
    }
    std::vector<double> p; // fallback: evenly spaced
    for (int i = 0; i < count; ++i) p.push_back(lo + (hi - lo) * (i + 1) / double(count + 1));
    return p;
}

} // namespace

FieldState random_initial(std::uint64_t seed, const Grid1D& grid, double support_lo,
                          double support_hi, double amplitude, double smoothness,
                          RandomFieldKind kind, FieldKind field_kind) {
    if (!(support_hi > support_lo)) throw ConfigError("random_initial: empty support");
    if (support_lo < grid.x_min || support_hi > grid.x_max)
        throw ConfigError("random_initial: support outside the grid");
    if (!(smoothness > 0.0)) throw ConfigError("random_initial: need smoothness > 0");
    if (amplitude < 0.0) throw ConfigError("random_initial: negative amplitude");
    if (kind == RandomFieldKind::KinkTrain && field_kind != FieldKind::Real)
        throw ConfigError("random_initial: kink trains are real fields");

    std::mt19937_64 rng(seed);
    const double ramp = 3.0 * smoothness;
    const double lo = support_lo, hi = support_hi;

    FieldState s = FieldState::zero(grid, field_kind);

    // Fixed draw order: psi bumps (re, then im for complex), pi bumps (re, im),
    // then the kink-train parameters.
    std::vector<Bump> psi_re_b = draw_bumps(rng, lo, hi, smoothness);
    std::vector<Bump> psi_im_b, pi_im_b;
    if (field_kind == FieldKind::Complex) psi_im_b = draw_bumps(rng, lo, hi, smoothness);
    std::vector<Bump> pi_re_b = draw_bumps(rng, lo, hi, smoothness);
    if (field_kind == FieldKind::Complex) pi_im_b = draw_bumps(rng, lo, hi, smoothness);

    int n_cross = 0;
    double train_sign = 1.0;
    std::vector<double> crossings;
    if (kind == RandomFieldKind::KinkTrain) {
        n_cross = 1 + int(rng() % 5);
        train_sign = (rng() & 1) ? 1.0 : -1.0;
        double margin = std::min(2.0, 0.25 * (hi - lo));
        crossings = kink_positions(rng, lo + margin, hi - margin, n_cross);
    }

    // Raw fields, then one global rescale so max|psi| (and max|pi|) are pinned.
    std::vector<double> raw_pre(grid.n_points), raw_pim, raw_qre(grid.n_points), raw_qim;
    if (field_kind == FieldKind::Complex) {
        raw_pim.resize(grid.n_points);
        raw_qim.resize(grid.n_points);
    }
    double max_psi = 0.0, max_pi = 0.0;
    for (int k = 0; k < grid.n_points; ++k) {
        double x = grid.x(k), W = window(x, lo, hi, ramp);
        raw_pre[k] = W * eval_bumps(psi_re_b, x);
        raw_qre[k] = W * eval_bumps(pi_re_b, x);
        double m2 = raw_pre[k] * raw_pre[k], q2 = raw_qre[k] * raw_qre[k];
        if (field_kind == FieldKind::Complex) {
            raw_pim[k] = W * eval_bumps(psi_im_b, x);
            raw_qim[k] = W * eval_bumps(pi_im_b, x);
            m2 += raw_pim[k] * raw_pim[k];
            q2 += raw_qim[k] * raw_qim[k];
        }
        max_psi = std::max(max_psi, m2);
        max_pi = std::max(max_pi, q2);
    }
    max_psi = std::sqrt(max_psi);
    max_pi = std::sqrt(max_pi);
    double s_psi = (amplitude > 0.0 && max_psi > 0.0) ? amplitude / max_psi : 0.0;
    double s_pi = (amplitude > 0.0 && max_pi > 0.0) ? 0.5 * amplitude / max_pi : 0.0;

    for (int k = 0; k < grid.n_points; ++k) {
        double x = grid.x(k);
        double train = 0.0;
        if (kind == RandomFieldKind::KinkTrain) {
            train = train_sign;
            for (double p : crossings) train *= std::tanh((x - p) / std::sqrt(2.0));
        }
        s.psi_re(k) = train + s_psi * raw_pre[k];
        s.pi_re(k) = s_pi * raw_qre[k];
        if (field_kind == FieldKind::Complex) {
            s.psi_im(k) = s_psi * raw_pim[k];
            s.pi_im(k) = s_pi * raw_qim[k];
        }
    }
    return s;
}

} // namespace slab
