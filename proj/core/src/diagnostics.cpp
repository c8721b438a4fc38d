#include "slab/diagnostics.hpp"

#include "slab/errors.hpp"
#include "slab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace slab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
// Half-amplitude width of the static kink, used only to flag absurdly wide bands.
constexpr double kKinkWidth = 1.5536;

} // namespace

void BandConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw ConfigError("band epsilon must lie in (0, 0.5)");
}

double interp_psi_re(const FieldState& state, double x) {
    const Grid1D& g = state.grid;
    double u = (x - g.x_min) / g.dx;
    int k = static_cast<int>(std::floor(u));
    if (k < 0) return state.psi_re(0);
    if (k >= g.n_points - 1) return state.psi_re(g.n_points - 1);
    double f = u - k;
    return (1.0 - f) * state.psi_re(k) + f * state.psi_re(k + 1);
}

double interp_abs_psi(const FieldState& state, double x) {
    const Grid1D& g = state.grid;
    double u = (x - g.x_min) / g.dx;
    int k = static_cast<int>(std::floor(u));
    if (k < 0) return state.abs_psi(0);
    if (k >= g.n_points - 1) return state.abs_psi(g.n_points - 1);
    double f = u - k;
    return (1.0 - f) * state.abs_psi(k) + f * state.abs_psi(k + 1);
}

LineFit linear_fit(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size() || t.size() < 2) throw ConfigError("linear_fit: need >= 2 points");
    const std::size_t n = t.size();
    double tm = std::accumulate(t.begin(), t.end(), 0.0) / n;
    double ym = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (t[i] - tm) * (t[i] - tm);
        sxy += (t[i] - tm) * (y[i] - ym);
    }
    LineFit f;
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    f.intercept = ym - f.slope * tm;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (f.intercept + f.slope * t[i]);
        f.max_residual = std::max(f.max_residual, std::abs(r));
        ss += r * r;
    }
    if (n > 2 && sxx > 0.0) f.slope_stderr = std::sqrt(ss / double(n - 2) / sxx);
    return f;
}

std::vector<KinkDetection> detect_kinks(const FieldState& state, const BandConfig& bands) {
    bands.validate();
    if (state.kind != FieldKind::Real)
        throw ConfigError("detect_kinks expects a real field connecting the vacua +-1");
    const Grid1D& g = state.grid;
    const double lim = 1.0 - bands.epsilon;

    std::vector<KinkDetection> out;
    int i = 0;
    while (i < g.n_points) {
        if (!(std::abs(state.psi_re(i)) < lim)) {
            ++i;
            continue;
        }
        int i0 = i;
        while (i < g.n_points && std::abs(state.psi_re(i)) < lim) ++i;
        int i1 = i - 1; // maximal run [i0, i1] inside the yellow band

        // Band edges, interpolated to |psi| = lim where a neighbor exists.
        double left = g.x(i0), right = g.x(i1);
        if (i0 > 0) {
            double a = std::abs(state.psi_re(i0 - 1)), b = std::abs(state.psi_re(i0));
            left = g.x(i0 - 1) + g.dx * (a - lim) / (a - b);
        }
        if (i1 + 1 < g.n_points) {
            double a = std::abs(state.psi_re(i1)), b = std::abs(state.psi_re(i1 + 1));
            right = g.x(i1) + g.dx * (lim - a) / (b - a);
        }

        // Sign changes between consecutive nonzero-sign nodes of the run.
        struct Crossing {
            double pos;
            int orient;
        };
        std::vector<Crossing> crossings;
        int prev = -1;
        for (int k = i0; k <= i1; ++k) {
            double v = state.psi_re(k);
            if (v == 0.0) continue;
            if (prev >= 0) {
                double u = state.psi_re(prev);
                if (u * v < 0.0) {
                    double pos = g.x(prev) + (g.x(k) - g.x(prev)) * (u / (u - v));
                    crossings.push_back({pos, v > u ? +1 : -1});
                }
            }
            prev = k;
        }
        if (crossings.empty()) continue;

        bool unres = crossings.size() >= 2 || (right - left) > 50.0 * kKinkWidth;
        for (const Crossing& c : crossings) {
            KinkDetection d;
            d.position = c.pos;
            d.orientation = c.orient;
            d.band_left = left;
            d.band_right = right;
            d.unresolved = unres;
            out.push_back(d);
        }
    }
    return out;
}

KinkTrack track(const Trajectory& traj, const BandConfig& bands, double gate_factor) {
    if (traj.snapshots.size() != traj.times.size())
        throw ConfigError("track needs a trajectory with kept snapshots");
    KinkTrack out;
    out.times = traj.times;
    if (traj.snapshots.empty()) return out;
    const double gate = gate_factor * traj.snapshots[0].grid.dx;

    std::vector<std::size_t> active; // indices into out.tracks
    for (std::size_t f = 0; f < traj.snapshots.size(); ++f) {
        std::vector<KinkDetection> dets = detect_kinks(traj.snapshots[f], bands);

        struct Pair {
            double dist;
            std::size_t a; // index into active
            std::size_t d; // index into dets
        };
        std::vector<Pair> pairs;
        for (std::size_t a = 0; a < active.size(); ++a) {
            const auto& tr = out.tracks[active[a]];
            double last = tr.positions.back();
            for (std::size_t d = 0; d < dets.size(); ++d) {
                if (dets[d].orientation != tr.orientation) continue;
                double dist = std::abs(dets[d].position - last);
                if (dist <= gate) pairs.push_back({dist, a, d});
            }
        }
        std::sort(pairs.begin(), pairs.end(),
                  [](const Pair& x, const Pair& y) { return x.dist < y.dist; });
        std::vector<char> a_used(active.size(), 0), d_used(dets.size(), 0);
        for (const Pair& p : pairs) {
            if (a_used[p.a] || d_used[p.d]) continue;
            a_used[p.a] = d_used[p.d] = 1;
            out.tracks[active[p.a]].positions.push_back(dets[p.d].position);
        }

        std::vector<std::size_t> next_active;
        for (std::size_t a = 0; a < active.size(); ++a) {
            if (a_used[a]) {
                next_active.push_back(active[a]);
            } else {
                auto& tr = out.tracks[active[a]];
                out.events.push_back({KinkTrack::Event::Kind::Death, traj.times[f],
                                      tr.positions.back()});
            }
        }
        for (std::size_t d = 0; d < dets.size(); ++d) {
            if (d_used[d]) continue;
            KinkTrack::Track tr;
            tr.first_frame = f;
            tr.orientation = dets[d].orientation;
            tr.positions.push_back(dets[d].position);
            out.tracks.push_back(std::move(tr));
            next_active.push_back(out.tracks.size() - 1);
            out.events.push_back({KinkTrack::Event::Kind::Birth, traj.times[f], dets[d].position});
        }
        active = std::move(next_active);
    }
    for (std::size_t idx : active) out.tracks[idx].alive = true;

    for (auto& tr : out.tracks) {
        tr.widths.reserve(tr.positions.size());
        tr.internal_phase.reserve(tr.positions.size());
        std::vector<double> ts(tr.positions.size());
        for (std::size_t j = 0; j < tr.positions.size(); ++j) {
            const FieldState& s = traj.snapshots[tr.first_frame + j];
            ts[j] = traj.times[tr.first_frame + j];
            tr.widths.push_back(measure_width(s, tr.positions[j], StructureKind::Kink).width);
            tr.internal_phase.push_back(interp_psi_re(s, tr.positions[j] + 1.0));
        }
        if (tr.positions.size() >= 2) {
            LineFit lf = linear_fit(ts, tr.positions);
            tr.velocity = lf.slope;
            tr.velocity_stderr = lf.slope_stderr;
            tr.fit_residual = lf.max_residual;
        }
    }
    return out;
}

WidthMeasurement measure_width(const FieldState& state, double center, StructureKind kind) {
    const Grid1D& g = state.grid;
    const int n = g.n_points;
    const bool kink_dev = kind == StructureKind::Kink;
    auto dev = [&](int k) { return kink_dev ? 1.0 - state.abs_psi(k) : state.abs_psi(k); };

    WidthMeasurement m;
    int kp = g.nearest_node(center);

    if (kind == StructureKind::Kink) {
        // The deviation 1-|psi| peaks at exactly 1 at a sign change; look for
        // the nearest one within a few units of the requested center.
        int span = std::max(1, static_cast<int>(5.0 / g.dx));
        int found = -1;
        for (int off = 0; off <= span && found < 0; ++off) {
            for (int sgn : {+1, -1}) {
                int k = kp + sgn * off;
                if (k < 0 || k + 1 >= n) continue;
                double u = state.psi_re(k), v = state.psi_re(k + 1);
                if (u == 0.0) {
                    found = k;
                    m.peak_position = g.x(k);
                    break;
                }
                if (u * v < 0.0) {
                    found = k;
                    m.peak_position = g.x(k) + g.dx * (u / (u - v));
                    break;
                }
            }
        }
        if (found >= 0) {
            m.peak_deviation = 1.0;
            kp = g.nearest_node(m.peak_position);
        }
        // else: no crossing (e.g. a dip mid-collision); fall through to the
        // plain local max of the same deviation.
    }

    if (m.peak_deviation == 0.0) {
        // Hill-climb to the local max of the deviation, then refine by parabola.
        while (kp + 1 < n && dev(kp + 1) > dev(kp)) ++kp;
        while (kp - 1 >= 0 && dev(kp - 1) > dev(kp)) --kp;
        m.peak_position = g.x(kp);
        m.peak_deviation = dev(kp);
        if (kp > 0 && kp + 1 < n) {
            double d0 = dev(kp - 1), d1 = dev(kp), d2 = dev(kp + 1);
            double a = 0.5 * (d0 - 2.0 * d1 + d2);
            double b = 0.5 * (d2 - d0);
            if (a < -1e-300) {
                double delta = -b / (2.0 * a);
                if (std::abs(delta) <= 1.0) {
                    m.peak_position = g.x(kp) + delta * g.dx;
                    m.peak_deviation = d1 + b * delta + a * delta * delta;
                }
            }
        }
    }

    double half = 0.5 * m.peak_deviation;
    m.width = kNaN;
    m.left_half = m.right_half = kNaN;
    if (!(half > 0.0)) return m;

    int kr = kp;
    while (kr + 1 < n && dev(kr + 1) >= half) ++kr;
    if (kr + 1 >= n) return m; // ran off the grid
    double a = dev(kr), b = dev(kr + 1);
    m.right_half = g.x(kr) + g.dx * (a - half) / (a - b);

    int kl = kp;
    while (kl - 1 >= 0 && dev(kl - 1) >= half) --kl;
    if (kl - 1 < 0) return m;
    a = dev(kl);
    b = dev(kl - 1);
    m.left_half = g.x(kl) - g.dx * (a - half) / (a - b);

    m.width = m.right_half - m.left_half;
    return m;
}

OscillationEstimate measure_oscillation(const std::vector<double>& times,
                                        const std::vector<double>& values) {
    if (times.size() != values.size() || times.size() < 5)
        throw ConfigError("measure_oscillation: need a series of >= 5 samples");
    LineFit trend = linear_fit(times, values);
    const std::size_t n = times.size();
    std::vector<double> yd(n);
    for (std::size_t i = 0; i < n; ++i)
        yd[i] = values[i] - (trend.intercept + trend.slope * times[i]);

    struct Extremum {
        double t, v;
        bool is_max;
    };
    std::vector<Extremum> ext;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        bool mx = yd[i] > yd[i - 1] && yd[i] >= yd[i + 1];
        bool mn = yd[i] < yd[i - 1] && yd[i] <= yd[i + 1];
        if (!mx && !mn) continue;
        double tv = times[i], vv = yd[i];
        double a = 0.5 * (yd[i - 1] - 2.0 * yd[i] + yd[i + 1]);
        double b = 0.5 * (yd[i + 1] - yd[i - 1]);
        if (std::abs(a) > 1e-300) {
            double delta = -b / (2.0 * a);
            if (std::abs(delta) <= 1.0) {
                double h = 0.5 * (times[i + 1] - times[i - 1]);
                tv = times[i] + delta * h;
                vv = yd[i] + b * delta + a * delta * delta;
            }
        }
        ext.push_back({tv, vv, mx});
    }
    // Enforce max/min alternation: of two same-type neighbors keep the more extreme.
    std::vector<Extremum> alt;
    for (const Extremum& e : ext) {
        if (!alt.empty() && alt.back().is_max == e.is_max) {
            bool keep_new = e.is_max ? e.v > alt.back().v : e.v < alt.back().v;
            if (keep_new) alt.back() = e;
        } else {
            alt.push_back(e);
        }
    }

    OscillationEstimate est;
    std::vector<double> periods;
    double prev_max = kNaN, prev_min = kNaN;
    double amp = 0.0;
    for (const Extremum& e : alt) {
        est.turning_times.push_back(e.t);
        est.turning_values.push_back(e.v + trend.intercept + trend.slope * e.t);
        amp += std::abs(e.v);
        double& prev = e.is_max ? prev_max : prev_min;
        if (!std::isnan(prev)) periods.push_back(e.t - prev);
        prev = e.t;
    }
    if (periods.empty()) throw ConfigError("measure_oscillation: fewer than one full period");
    est.n_periods = static_cast<int>(periods.size());
    est.period = std::accumulate(periods.begin(), periods.end(), 0.0) / periods.size();
    if (periods.size() > 1) {
        double ss = 0.0;
        for (double p : periods) ss += (p - est.period) * (p - est.period);
        est.period_stderr = std::sqrt(ss / double(periods.size() - 1) / double(periods.size()));
    }
    est.angular_frequency = 2.0 * M_PI / est.period;
    est.amplitude = alt.empty() ? 0.0 : amp / alt.size();
    return est;
}

namespace {

// Per-frame positions of live tracks, for masking.
std::vector<std::vector<double>> track_positions_by_frame(const KinkTrack& tracks,
                                                          std::size_t n_frames) {
    std::vector<std::vector<double>> pos(n_frames);
    for (const auto& tr : tracks.tracks)
        for (std::size_t j = 0; j < tr.positions.size(); ++j) {
            std::size_t f = tr.first_frame + j;
            if (f < n_frames) pos[f].push_back(tr.positions[j]);
        }
    return pos;
}

} // namespace

std::vector<double> ridge_speeds(const Trajectory& traj, const RidgeConfig& cfg) {
    if (traj.snapshots.size() != traj.times.size() || traj.snapshots.size() < 8)
        throw ConfigError("ridge_speeds: need a snapshot-bearing trajectory of >= 8 frames");
    const Grid1D& g = traj.snapshots[0].grid;
    const std::size_t F = traj.snapshots.size();
    const int n = g.n_points;

    // Space-time deviation array with structure neighborhoods and edges masked
    // (negative entries mean masked).
    std::vector<double> A(F * static_cast<std::size_t>(n));
    std::vector<std::vector<double>> excl;
    if (cfg.exclude) excl = track_positions_by_frame(*cfg.exclude, F);
    for (std::size_t f = 0; f < F; ++f) {
        const FieldState& s = traj.snapshots[f];
        for (int k = 0; k < n; ++k) {
            double x = g.x(k);
            double d = std::abs(s.abs_psi(k) - cfg.vacuum_abs);
            if (cfg.edge_margin > 0.0 &&
                (x < g.x_min + cfg.edge_margin || x > g.x_max - cfg.edge_margin))
                d = -1.0;
            if (cfg.exclude && d >= 0.0)
                for (double p : excl[f])
                    if (std::abs(x - p) < cfg.exclusion_radius) {
                        d = -1.0;
                        break;
                    }
            A[f * n + k] = d;
        }
    }

    const double t0 = traj.times.front();
    std::vector<double> speeds, intercepts;
    for (double v = cfg.speed_min; v <= cfg.speed_max + 1e-12; v += cfg.speed_step)
        speeds.push_back(v);
    for (double b = g.x_min; b <= g.x_max + 1e-12; b += cfg.intercept_step)
        intercepts.push_back(b);

    const std::size_t nv = speeds.size(), nb = intercepts.size();
    std::vector<double> score(nv * nb, 0.0);
    for (std::size_t iv = 0; iv < nv; ++iv) {
        for (std::size_t ib = 0; ib < nb; ++ib) {
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t f = 0; f < F; ++f) {
                double x = intercepts[ib] + speeds[iv] * (traj.times[f] - t0);
                if (x < g.x_min || x > g.x_max) continue;
                double d = A[f * n + g.nearest_node(x)];
                if (d < 0.0) continue;
                sum += d;
                ++count;
            }
            if (count >= std::size_t(cfg.min_span * double(F)))
                score[iv * nb + ib] = count ? sum / double(count) : 0.0;
        }
    }

    struct Candidate {
        double s, v, b;
    };
    std::vector<Candidate> cands;
    for (std::size_t iv = 0; iv < nv; ++iv)
        for (std::size_t ib = 0; ib < nb; ++ib) {
            double sc = score[iv * nb + ib];
            if (sc < cfg.threshold) continue;
            bool is_max = true;
            for (int dv = -1; dv <= 1 && is_max; ++dv)
                for (int db = -1; db <= 1; ++db) {
                    if (dv == 0 && db == 0) continue;
                    std::size_t jv = iv + dv, jb = ib + db;
                    if (jv >= nv || jb >= nb) continue;
                    if (score[jv * nb + jb] > sc) {
                        is_max = false;
                        break;
                    }
                }
            if (is_max) cands.push_back({sc, speeds[iv], intercepts[ib]});
        }
    std::sort(cands.begin(), cands.end(),
              [](const Candidate& a, const Candidate& b) { return a.s > b.s; });

    std::vector<double> out;
    std::vector<Candidate> kept;
    for (const Candidate& c : cands) {
        bool suppressed = false;
        for (const Candidate& k : kept)
            if (std::abs(c.v - k.v) <= 0.05 && std::abs(c.b - k.b) <= 5.0) {
                suppressed = true;
                break;
            }
        if (suppressed) continue;
        kept.push_back(c);
        out.push_back(c.v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Manifold fitting

namespace {

struct FitObjective {
    const FieldState& s;
    const SolitonFamilyTable& fam;
    int i0, i1, stride;
    double norm2; // ||state||^2 over the window at this stride

    // Residual^2 minimized over theta (closed form); optionally outputs theta.
    double eval(double omega, double v, double q, double* theta_out = nullptr) const {
        if (!fam.spans(omega) || !(std::abs(v) < 0.95)) return kInf;
        const SolitaryWaveProfile* pr;
        try {
            pr = &fam.profile(omega);
        } catch (const std::exception&) {
            return kInf;
        }
        double gamma = 1.0 / std::sqrt(1.0 - v * v);
        double ar = 0.0, ai = 0.0, nm2 = 0.0;
        const Grid1D& g = s.grid;
        for (int k = i0; k <= i1; k += stride) {
            BoostSample b = boost_sample(*pr, gamma, v, 0.0, g.x(k) - q);
            double sr = s.psi_re(k), si = s.psi_im(k);
            double tr = s.pi_re(k), ti = s.pi_im(k);
            // A = <state, model0> with conjugation on the model
            ar += sr * b.psi_re + si * b.psi_im + tr * b.pi_re + ti * b.pi_im;
            ai += si * b.psi_re - sr * b.psi_im + ti * b.pi_re - tr * b.pi_im;
            nm2 += b.psi_re * b.psi_re + b.psi_im * b.psi_im + b.pi_re * b.pi_re +
                   b.pi_im * b.pi_im;
        }
        double w = s.grid.dx * stride;
        double amod = std::sqrt(ar * ar + ai * ai);
        if (theta_out) *theta_out = std::atan2(ai, ar);
        return norm2 + (nm2 - 2.0 * amod) * w;
    }

    static double state_norm2(const FieldState& s, int i0, int i1, int stride) {
        double acc = 0.0;
        for (int k = i0; k <= i1; k += stride)
            acc += s.psi_re(k) * s.psi_re(k) + s.psi_im(k) * s.psi_im(k) +
                   s.pi_re(k) * s.pi_re(k) + s.pi_im(k) * s.pi_im(k);
        return acc * s.grid.dx * stride;
    }
};

// Golden-section minimization of f over [a, b].
template <class F> double golden_min(F&& f, double a, double b, int iters) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

ManifoldFit descend(const FieldState& state, const SolitonFamilyTable& fam, int i0, int i1,
                    double omega, double v, double q, double br_omega, double br_v, double br_q,
                    int sweeps) {
    FitObjective obj{state, fam, i0, i1, 1, FitObjective::state_norm2(state, i0, i1, 1)};
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        q = golden_min([&](double t) { return obj.eval(omega, v, t); }, q - br_q, q + br_q, 24);
        double vlo = std::max(-0.9, v - br_v), vhi = std::min(0.9, v + br_v);
        v = golden_min([&](double t) { return obj.eval(omega, t, q); }, vlo, vhi, 24);
        double wlo = std::max(fam.omega_lo, omega - br_omega);
        double whi = std::min(fam.omega_hi, omega + br_omega);
        omega = golden_min([&](double t) { return obj.eval(t, v, q); }, wlo, whi, 24);
        br_q *= 0.45;
        br_v *= 0.45;
        br_omega *= 0.45;
    }
    ManifoldFit fit;
    fit.omega = omega;
    fit.v = v;
    fit.q = q;
    double res2 = obj.eval(omega, v, q, &fit.theta);
    fit.residual = std::sqrt(std::max(0.0, res2));
    fit.state_norm = std::sqrt(obj.norm2);
    fit.off_manifold = fit.residual > 0.5 * fit.state_norm;
    return fit;
}

void fit_window(const FieldState& state, double q_est, double radius, int& i0, int& i1) {
    const Grid1D& g = state.grid;
    i0 = std::max(0, g.nearest_node(q_est - radius));
    i1 = std::min(g.n_points - 1, g.nearest_node(q_est + radius));
    if (i1 - i0 < 8) throw ConfigError("fit_manifold: window too small");
}

} // namespace

ManifoldFit fit_manifold(const FieldState& state, const SolitonFamilyTable& family,
                         double window_radius) {
    if (family.rows.empty() && !(family.omega_hi > family.omega_lo))
        throw ConfigError("fit_manifold: empty family");
    const Grid1D& g = state.grid;

    // Position estimate: intensity centroid around the strongest node.
    int kmax = 0;
    for (int k = 1; k < g.n_points; ++k)
        if (state.abs_psi(k) > state.abs_psi(kmax)) kmax = k;
    double xc = g.x(kmax);
    double wsum = 0.0, xsum = 0.0;
    for (int k = 0; k < g.n_points; ++k) {
        if (std::abs(g.x(k) - xc) > window_radius) continue;
        double w = state.psi_re(k) * state.psi_re(k) + state.psi_im(k) * state.psi_im(k) +
                   state.pi_re(k) * state.pi_re(k) + state.pi_im(k) * state.pi_im(k);
        wsum += w;
        xsum += w * g.x(k);
    }
    double q_est = wsum > 0.0 ? xsum / wsum : xc;

    int i0, i1;
    fit_window(state, q_est, window_radius, i0, i1);

    // Coarse grid with a subsampled window.
    int stride = std::max(1, (i1 - i0) / 160);
    FitObjective coarse{state, family, i0, i1, stride,
                       FitObjective::state_norm2(state, i0, i1, stride)};
    double best = kInf, bw = 0.5 * (family.omega_lo + family.omega_hi), bv = 0.0, bq = q_est;
    for (int iw = 0; iw < 9; ++iw) {
        double omega = family.omega_lo + (family.omega_hi - family.omega_lo) * iw / 8.0;
        for (double v = -0.45; v <= 0.451; v += 0.15)
            for (double q = q_est - 2.0; q <= q_est + 2.01; q += 0.5) {
                double r = coarse.eval(omega, v, q);
                if (r < best) {
                    best = r;
                    bw = omega;
                    bv = v;
                    bq = q;
                }
            }
    }
    return descend(state, family, i0, i1, bw, bv, bq, 0.05, 0.12, 0.75, 6);
}

ManifoldFit refine_manifold_fit(const FieldState& state, const SolitonFamilyTable& family,
                                const ManifoldFit& start, double window_radius) {
    int i0, i1;
    fit_window(state, start.q, window_radius, i0, i1);
    return descend(state, family, i0, i1, start.omega, start.v, start.q, 0.012, 0.05, 0.35, 4);
}

ConvergenceReport convergence_report(const Trajectory& traj, const FieldState& limit, double R) {
    if (traj.snapshots.size() != traj.times.size())
        throw ConfigError("convergence_report needs kept snapshots");
    ConvergenceReport rep;
    rep.times = traj.times;
    rep.distances.reserve(traj.snapshots.size());
    for (const FieldState& s : traj.snapshots)
        rep.distances.push_back(local_l2_distance(s, limit, R));
    std::size_t dec = 0, total = 0;
    for (std::size_t i = 0; i + 1 < rep.distances.size(); ++i, ++total)
        if (rep.distances[i + 1] <= rep.distances[i]) ++dec;
    rep.decreasing_fraction = total ? double(dec) / double(total) : 1.0;
    return rep;
}

namespace {

std::vector<double> energy_density(const FieldState& s, const ModelSpec& model) {
    const Grid1D& g = s.grid;
    const int n = g.n_points;
    std::vector<double> e(n);
    for (int k = 0; k < n; ++k) {
        int kl = std::max(0, k - 1), kr = std::min(n - 1, k + 1);
        double h = (kr - kl) * g.dx;
        double dre = (s.psi_re(kr) - s.psi_re(kl)) / h;
        double dim = s.kind == FieldKind::Complex ? (s.psi_im(kr) - s.psi_im(kl)) / h : 0.0;
        double a2 = s.psi_re(k) * s.psi_re(k) + s.psi_im(k) * s.psi_im(k);
        double p2 = s.pi_re(k) * s.pi_re(k) + s.pi_im(k) * s.pi_im(k);
        e[k] = 0.5 * p2 + 0.5 * (dre * dre + dim * dim) + 0.5 * model.mass2 * a2 +
               eval_U(model.nonlinearity, std::sqrt(a2));
    }
    return e;
}

} // namespace

SolitonTrack track_soliton(const Trajectory& traj, const ModelSpec& model, double q0_hint,
                           double window_halfwidth, double continuity_gate,
                           double envelope_window, double width_gate_fraction) {
    if (traj.snapshots.size() != traj.times.size())
        throw ConfigError("track_soliton needs kept snapshots");
    SolitonTrack out;
    double q_prev = q0_hint;
    std::vector<std::pair<double, double>> peak_hist; // (time, peak)

    for (std::size_t f = 0; f < traj.snapshots.size(); ++f) {
        const FieldState& s = traj.snapshots[f];
        const Grid1D& g = s.grid;
        std::vector<double> e = energy_density(s, model);

        double wsum = 0.0, xsum = 0.0, peak = 0.0;
        for (int k = 0; k < g.n_points; ++k) {
            if (std::abs(g.x(k) - q_prev) > window_halfwidth) continue;
            double w = std::max(0.0, e[k]);
            wsum += w;
            xsum += w * g.x(k);
            peak = std::max(peak, s.abs_psi(k));
        }
        if (wsum <= 0.0) {
            out.lost = true;
            out.loss_time = traj.times[f];
            break;
        }
        double q = xsum / wsum;
        if (f > 0 && std::abs(q - q_prev) > continuity_gate) {
            out.lost = true;
            out.loss_time = traj.times[f];
            break;
        }

        peak_hist.emplace_back(traj.times[f], peak);
        double env = 0.0;
        for (auto it = peak_hist.rbegin(); it != peak_hist.rend(); ++it) {
            if (traj.times[f] - it->first > envelope_window) break;
            env = std::max(env, it->second);
        }

        out.times.push_back(traj.times[f]);
        out.positions.push_back(q);
        out.peaks.push_back(peak);
        out.envelopes.push_back(env);
        if (peak >= width_gate_fraction * env && env > 0.0)
            out.widths.push_back(measure_width(s, q, StructureKind::Soliton).width);
        else
            out.widths.push_back(kNaN);
        q_prev = q;
    }
    return out;
}

SeriesReport outside_energy_series(const Trajectory& traj, const ModelSpec& model,
                                   const KinkTrack& tracks, double radius, double edge_margin) {
    if (traj.snapshots.size() != traj.times.size())
        throw ConfigError("outside_energy_series needs kept snapshots");
    SeriesReport rep;
    std::vector<std::vector<double>> pos =
        track_positions_by_frame(tracks, traj.snapshots.size());
    for (std::size_t f = 0; f < traj.snapshots.size(); ++f) {
        const FieldState& s = traj.snapshots[f];
        const Grid1D& g = s.grid;
        std::vector<double> e = energy_density(s, model);
        double acc = 0.0;
        for (int k = 0; k < g.n_points; ++k) {
            double x = g.x(k);
            if (x < g.x_min + edge_margin || x > g.x_max - edge_margin) continue;
            bool near = false;
            for (double p : pos[f])
                if (std::abs(x - p) <= radius) {
                    near = true;
                    break;
                }
            if (near) continue;
            double w = (k == 0 || k == g.n_points - 1) ? 0.5 : 1.0;
            acc += w * e[k] * g.dx;
        }
        rep.times.push_back(traj.times[f]);
        rep.values.push_back(acc);
    }
    return rep;
}

} // namespace slab
