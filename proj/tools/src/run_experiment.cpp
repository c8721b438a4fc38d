#include "run_experiment.hpp"

#include "slab/diagnostics.hpp"
#include "slab/dump.hpp"
#include "slab/effective.hpp"
#include "slab/errors.hpp"
#include "slab/integrate.hpp"
#include "slab/ppm.hpp"
#include "slab/profile.hpp"
#include "slab/random_field.hpp"
#include "slab/spectral.hpp"
#include "slab/string_osc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace slab::cli {

namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------- csv output

class Csv {
  public:
    Csv(const fs::path& path, const std::string& schema) : out_(path, std::ios::binary) {
        if (!out_) throw ConfigError("cannot open for writing: " + path.string());
        out_ << "# " << schema << "\n";
    }
    void row(std::initializer_list<double> vals) {
        bool first = true;
        for (double v : vals) {
            if (!first) out_ << ',';
            out_ << format_double(v);
            first = false;
        }
        out_ << '\n';
    }
    void raw(const std::string& line) { out_ << line << '\n'; }

  private:
    std::ofstream out_;
};

std::string join_double(std::initializer_list<double> vals) {
    std::string s;
    for (double v : vals) {
        if (!s.empty()) s += ',';
        s += format_double(v);
    }
    return s;
}

// ------------------------------------------------------------- param helpers

double need_double(const KeyValueMap& p, const std::string& key) {
    if (!p.count(key)) throw ConfigError("missing parameter '" + key + "'");
    return get_double(p, key, 0.0);
}

int need_int(const KeyValueMap& p, const std::string& key) {
    if (!p.count(key)) throw ConfigError("missing parameter '" + key + "'");
    return static_cast<int>(get_int(p, key, 0));
}

Boundary boundary_from_params(const KeyValueMap& p, const FieldState& initial) {
    std::string b = get_string(p, "boundary", "dirichlet");
    if (b == "dirichlet") {
        double left = initial.psi_re(0);
        double right = initial.psi_re(initial.n() - 1);
        return Boundary::dirichlet_vacuum(left, right);
    }
    if (b == "periodic") return Boundary::periodic();
    if (b == "sponge")
        return Boundary::sponge(need_double(p, "sponge_width"),
                                get_double(p, "sponge_strength", 5.0));
    throw ConfigError("boundary must be dirichlet, periodic or sponge (got '" + b + "')");
}

// ------------------------------------------------------- experiment sections

void write_observables(const fs::path& dir, const Trajectory& traj) {
    std::vector<std::string> names;
    for (const auto& [name, series] : traj.observables) names.push_back(name);
    std::string schema = "t";
    for (const auto& n : names) schema += "," + n;
    Csv csv(dir / "observables.csv", schema);
    for (std::size_t i = 0; i < traj.frames(); ++i) {
        std::string line = format_double(traj.times[i]);
        for (const auto& n : names) line += "," + format_double(traj.observables.at(n)[i]);
        csv.raw(line);
    }
}

void write_dumps(const fs::path& dir, const Trajectory& traj, int stride) {
    if (traj.snapshots.empty()) return;
    std::vector<std::size_t> picks{0};
    if (stride > 0)
        for (std::size_t f = static_cast<std::size_t>(stride); f + 1 < traj.frames();
             f += static_cast<std::size_t>(stride))
            picks.push_back(f);
    if (traj.frames() > 1) picks.push_back(traj.frames() - 1);
    for (std::size_t f : picks) {
        char name[32];
        std::snprintf(name, sizeof name, "state_%06zu.slab", f);
        write_dump(traj.snapshots[f], (dir / name).string());
    }
}

/** Space-time heatmap decimated to at most 1200 x 800 pixels. */
void write_heatmap(const fs::path& dir, const Trajectory& traj, const std::string& mode,
                   double eps) {
    if (traj.snapshots.empty()) return;
    const int n = traj.snapshots.front().grid.n_points;
    const int frames = static_cast<int>(traj.frames());
    const int cs = std::max(1, (n + 1199) / 1200);
    const int rs = std::max(1, (frames + 799) / 800);
    const int w = (n + cs - 1) / cs;
    const int h = (frames + rs - 1) / rs;
    std::vector<Rgb> px(static_cast<std::size_t>(w) * h);
    if (mode == "magnitude") {
        double peak = 0.0;
        for (int r = 0; r < h; ++r) {
            const FieldState& s = traj.snapshots[static_cast<std::size_t>(r) * rs];
            for (int c = 0; c < w; ++c) peak = std::max(peak, s.abs_psi(c * cs));
        }
        if (peak <= 0.0) peak = 1.0;
        for (int r = 0; r < h; ++r) {
            const FieldState& s = traj.snapshots[static_cast<std::size_t>(r) * rs];
            for (int c = 0; c < w; ++c) {
                double u = s.abs_psi(c * cs) / peak;
                auto g = static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(u, 0.0, 1.0)));
                px[static_cast<std::size_t>(r) * w + c] = Rgb{g, g, g};
            }
        }
    } else {
        for (int r = 0; r < h; ++r) {
            const FieldState& s = traj.snapshots[static_cast<std::size_t>(r) * rs];
            for (int c = 0; c < w; ++c)
                px[static_cast<std::size_t>(r) * w + c] = band_color(s.psi_re(c * cs), eps);
        }
    }
    write_ppm((dir / "heatmap.ppm").string(), px, w, h);
}

void write_track_reports(const fs::path& dir, const Trajectory& traj, const KinkTrack& kt,
                         double fit_t_lo, double fit_t_hi) {
    {
        Csv csv(dir / "tracks.csv", "track,t,position,width,internal_phase");
        for (std::size_t ti = 0; ti < kt.tracks.size(); ++ti) {
            const auto& tr = kt.tracks[ti];
            for (std::size_t f = 0; f < tr.frames(); ++f)
                csv.raw(std::to_string(ti) + "," +
                        join_double({kt.times[tr.first_frame + f], tr.positions[f], tr.widths[f],
                                     tr.internal_phase[f]}));
        }
    }
    {
        Csv csv(dir / "track_summary.csv",
                "track,first_t,last_t,orientation,velocity,velocity_stderr,fit_residual,"
                "late_velocity,alive");
        for (std::size_t ti = 0; ti < kt.tracks.size(); ++ti) {
            const auto& tr = kt.tracks[ti];
            // escape velocity: refit on the late window only
            std::vector<double> lt, lx;
            for (std::size_t f = 0; f < tr.frames(); ++f) {
                double t = kt.times[tr.first_frame + f];
                if (t >= fit_t_lo && t <= fit_t_hi) {
                    lt.push_back(t);
                    lx.push_back(tr.positions[f]);
                }
            }
            double late_v = lt.size() >= 2 ? linear_fit(lt, lx).slope : 0.0;
            csv.raw(std::to_string(ti) + "," +
                    join_double({kt.times[tr.first_frame], kt.times[tr.last_frame()],
                                 double(tr.orientation), tr.velocity, tr.velocity_stderr,
                                 tr.fit_residual, late_v, tr.alive ? 1.0 : 0.0}));
        }
    }
    {
        Csv csv(dir / "events.csv", "kind,t,position");
        for (const auto& ev : kt.events)
            csv.raw(std::string(ev.kind == KinkTrack::Event::Kind::Birth ? "birth" : "death") +
                    "," + join_double({ev.time, ev.position}));
    }
    (void)traj;
}

/** Local maxima of |psi| above `floor`, at least `gap` apart, inside [lo, hi]. */
std::vector<std::pair<double, double>> find_lumps(const FieldState& s, double floor, double gap,
                                                  double lo, double hi) {
    std::vector<std::pair<double, double>> lumps; // (position, peak)
    const Grid1D& g = s.grid;
    int last = -1;
    for (int k = 1; k + 1 < g.n_points; ++k) {
        double x = g.x(k);
        if (x < lo || x > hi) continue;
        double a = s.abs_psi(k);
        if (a < floor) continue;
        if (!(a >= s.abs_psi(k - 1) && a > s.abs_psi(k + 1))) continue;
        if (last >= 0 && x - lumps.back().first < gap) {
            if (a > lumps.back().second) lumps.back() = {x, a};
            continue;
        }
        lumps.push_back({x, a});
        last = k;
    }
    return lumps;
}

// ---------------------------------------------------------------- summaries

void append_summary(KeyValueMap& s, const std::string& key, double v) {
    s[key] = format_double(v);
}

// ------------------------------------------------------------ preset drivers

void run_spectrum_check(const KeyValueMap& p, const fs::path& dir) {
    Grid1D grid = grid_from_params(p);
    std::string pot = get_string(p, "potential", "kink");
    SchrodingerOperator1D op;
    double below = get_double(p, "below", 1.99);
    if (pot == "kink") {
        op = kink_linearization(grid);
    } else if (pot.rfind("sech2:", 0) == 0) {
        double depth = 0.0;
        try {
            depth = std::stod(pot.substr(6));
        } catch (const std::exception&) {
            throw ConfigError("potential sech2:<depth> needs a numeric depth");
        }
        op.grid = grid;
        op.V.resize(static_cast<std::size_t>(grid.n_points));
        for (int k = 0; k < grid.n_points; ++k) {
            double c = std::cosh(grid.x(k));
            op.V[static_cast<std::size_t>(k)] = -depth / (c * c);
        }
        if (!p.count("below")) below = -1e-3;
    } else {
        throw ConfigError("potential must be 'kink' or 'sech2:<depth>' (got '" + pot + "')");
    }
    SpectrumResult spec = discrete_spectrum(op, below);
    {
        Csv csv(dir / "eigenvalues.csv", "index,eigenvalue");
        for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i)
            csv.raw(std::to_string(i) + "," + format_double(spec.eigenvalues[i]));
    }
    KeyValueMap s;
    s["n_eigenvalues"] = std::to_string(spec.eigenvalues.size());
    append_summary(s, "below", below);
    append_summary(s, "margin", spec.margin);
    s["edge_warning"] = spec.edge_warning ? "true" : "false";
    save_config_file(s, (dir / "summary.txt").string());
    std::cout << "spectrum: " << spec.eigenvalues.size() << " discrete eigenvalue(s) below "
              << format_double(below - spec.margin) << "\n";
}

std::function<double(double)> oscillator_force(const std::string& name) {
    if (name == "cubic") return [](double y) { return y - y * y * y; };
    if (name == "linear") return [](double y) { return -y; };
    throw ConfigError("osc_force must be cubic or linear (got '" + name + "')");
}

void run_string(const KeyValueMap& p, const fs::path& dir) {
    Grid1D grid = grid_from_params(p);
    const double x_c = need_double(p, "coupling_x");
    auto F = oscillator_force(get_string(p, "osc_force", "cubic"));

    FieldState init = random_initial(
        static_cast<std::uint64_t>(get_int(p, "seed", 1)), grid, need_double(p, "support_lo"),
        need_double(p, "support_hi"), need_double(p, "amplitude"), need_double(p, "smoothness"),
        RandomFieldKind::Bumps, FieldKind::Real);

    StringOscillatorModel model;
    model.couplings.push_back({x_c, F});

    IntegratorConfig cfg;
    cfg.dt = need_double(p, "dt");
    cfg.record_every = need_int(p, "record_every");
    cfg.boundary = boundary_from_params(p, init);

    std::vector<Probe> probes{{"trace", [x_c](const FieldState& s) { return interp_psi_re(s, x_c); }}};
    Trajectory traj = simulate_string(model, init, cfg, need_double(p, "t_end"), probes);

    // reduced ODE for the same trace, fed by the free-field velocity computed
    // from the (frozen) initial data
    FieldState init_copy = init;
    auto psi0_prime = [init_copy](double x) {
        double h = init_copy.grid.dx;
        return (interp_psi_re(init_copy, x + h) - interp_psi_re(init_copy, x - h)) / (2.0 * h);
    };
    auto pi0 = [init_copy](double x) {
        const FieldState& s = init_copy;
        const Grid1D& g = s.grid;
        if (x <= g.x_min || x >= g.x_max) return 0.0;
        double u = (x - g.x_min) / g.dx;
        int k = std::min(static_cast<int>(u), g.n_points - 2);
        double w = u - k;
        return s.pi[static_cast<std::size_t>(k)] * (1.0 - w) +
               s.pi[static_cast<std::size_t>(k) + 1] * w;
    };
    auto incoming = incoming_from_initial(psi0_prime, pi0, x_c);
    TraceOracle oracle =
        trace_ode_oracle(F, interp_psi_re(init, x_c), incoming, cfg.dt, need_double(p, "t_end"));

    double sup_diff = 0.0;
    {
        Csv csv(dir / "trace.csv", "t,y_grid,y_ode");
        for (std::size_t i = 0; i < traj.frames(); ++i) {
            double t = traj.times[i];
            // oracle is sampled at every dt step; frame times land on multiples
            std::size_t j = std::min(oracle.times.size() - 1,
                                     static_cast<std::size_t>(std::lround(t / cfg.dt)));
            double yo = oracle.y[j];
            double yg = traj.series("trace")[i];
            sup_diff = std::max(sup_diff, std::abs(yg - yo));
            csv.row({t, yg, yo});
        }
    }

    auto zeros = stationary_states(F, -2.0, 2.0);
    double y_final = traj.series("trace").back();
    double best = zeros.empty() ? 0.0 : zeros.front();
    for (double z : zeros)
        if (std::abs(z - y_final) < std::abs(best - y_final)) best = z;
    ConvergenceReport conv = convergence_report(traj, constant_state(grid, best), 10.0);
    {
        Csv csv(dir / "convergence.csv", "t,distance_to_limit");
        for (std::size_t i = 0; i < conv.times.size(); ++i)
            csv.row({conv.times[i], conv.distances[i]});
    }

    write_observables(dir, traj);
    write_dumps(dir, traj, static_cast<int>(get_int(p, "dump_stride", 0)));
    write_heatmap(dir, traj, get_string(p, "heatmap", "magnitude"), get_double(p, "eps", 0.05));

    KeyValueMap s;
    {
        std::string zs;
        for (double z : zeros) zs += (zs.empty() ? "" : " ") + format_double(z);
        s["stationary_states"] = zs;
    }
    append_summary(s, "trace_final", y_final);
    append_summary(s, "selected_limit", best);
    append_summary(s, "final_distance", conv.distances.back());
    append_summary(s, "decreasing_fraction", conv.decreasing_fraction);
    append_summary(s, "sup_trace_vs_ode", sup_diff);
    save_config_file(s, (dir / "summary.txt").string());
    std::cout << "string: trace -> " << format_double(y_final) << " (limit "
              << format_double(best) << "), sup |grid - ode| = " << format_double(sup_diff)
              << "\n";
}

void analyze_kink_run(const KeyValueMap& p, const fs::path& dir, const ModelSpec& model,
                      const Trajectory& traj, KeyValueMap& summary) {
    BandConfig bands;
    bands.epsilon = get_double(p, "eps", 0.05);
    KinkTrack kt = track(traj, bands);
    double t_hi = traj.times.back();
    double fit_lo = get_double(p, "fit_t_lo", 0.7 * t_hi);
    double fit_hi = get_double(p, "fit_t_hi", t_hi);
    write_track_reports(dir, traj, kt, fit_lo, fit_hi);

    std::string preset = get_string(p, "preset", "");
    if (preset == "fig4_kinks") {
        RidgeConfig rc;
        rc.threshold = get_double(p, "ridge_threshold", 0.02);
        rc.exclusion_radius = get_double(p, "ridge_exclusion", 15.0);
        rc.exclude = &kt;
        rc.edge_margin = get_double(p, "edge_margin", 5.0);
        std::vector<double> speeds = ridge_speeds(traj, rc);
        Csv csv(dir / "ridges.csv", "speed");
        for (double v : speeds) csv.row({v});
        summary["n_ridges"] = std::to_string(speeds.size());
    }
    if (p.count("outside_radius")) {
        SeriesReport rep = outside_energy_series(traj, model, kt, need_double(p, "outside_radius"),
                                                 get_double(p, "edge_margin", 0.0));
        Csv csv(dir / "outside_energy.csv", "t,energy_outside");
        for (std::size_t i = 0; i < rep.times.size(); ++i) csv.row({rep.times[i], rep.values[i]});
    }
    int alive = 0;
    for (const auto& tr : kt.tracks) alive += tr.alive ? 1 : 0;
    summary["n_tracks"] = std::to_string(kt.tracks.size());
    summary["n_alive"] = std::to_string(alive);

    if (preset == "kink_kinematics" && !kt.tracks.empty()) {
        // the longest-lived track carries the excited mode
        const auto* main_tr = &kt.tracks.front();
        for (const auto& tr : kt.tracks)
            if (tr.frames() > main_tr->frames()) main_tr = &tr;
        std::vector<double> wt, wv;
        for (std::size_t f = 0; f < main_tr->frames(); ++f) {
            if (std::isnan(main_tr->widths[f])) continue;
            wt.push_back(kt.times[main_tr->first_frame + f]);
            wv.push_back(main_tr->widths[f]);
        }
        append_summary(summary, "velocity", main_tr->velocity);
        try {
            OscillationEstimate osc = measure_oscillation(wt, wv);
            append_summary(summary, "width_frequency", osc.angular_frequency);
            append_summary(summary, "width_period", osc.period);
            append_summary(summary, "width_period_stderr", osc.period_stderr);
            append_summary(summary, "width_osc_amplitude", osc.amplitude);
            summary["width_n_periods"] = std::to_string(osc.n_periods);
        } catch (const ConfigError& e) {
            summary["width_oscillation"] = std::string("unavailable: ") + e.what();
        }
    }
}

void analyze_lump_run(const KeyValueMap& p, const fs::path& dir, const Trajectory& traj,
                      KeyValueMap& summary) {
    double floor = get_double(p, "peak_floor", 0.3);
    double gap = get_double(p, "peak_gap", 2.0);
    double margin = get_double(p, "sponge_width", 0.0);
    const Grid1D& g = traj.snapshots.front().grid;
    double lo = g.x_min + margin, hi = g.x_max - margin;
    {
        Csv csv(dir / "lumps.csv", "t,count");
        for (std::size_t i = 0; i < traj.frames(); ++i)
            csv.row({traj.times[i],
                     double(find_lumps(traj.snapshots[i], floor, gap, lo, hi).size())});
    }
    auto last = find_lumps(traj.snapshots.back(), floor, gap, lo, hi);
    {
        Csv csv(dir / "final_lumps.csv", "position,peak");
        for (const auto& [x, a] : last) csv.row({x, a});
    }
    summary["final_lump_count"] = std::to_string(last.size());
}

void analyze_adiabatic_run(const KeyValueMap& p, const fs::path& dir, const ModelSpec& model,
                           const Trajectory& traj, KeyValueMap& summary) {
    double q0 = need_double(p, "q0");
    double halfwidth = get_double(p, "window_halfwidth", 14.0);
    SolitonTrack st = track_soliton(traj, model, q0, halfwidth);
    {
        Csv csv(dir / "soliton_track.csv", "t,q,peak,envelope,width");
        for (std::size_t i = 0; i < st.times.size(); ++i)
            csv.row({st.times[i], st.positions[i], st.peaks[i], st.envelopes[i], st.widths[i]});
    }
    summary["tracking_lost"] = st.lost ? "true" : "false";
    if (st.lost) append_summary(summary, "loss_time", st.loss_time);

    if (!get_bool(p, "effective_compare", true)) return;

    ModelSpec free_model = model;
    free_model.external = ExternalPotential::zero();
    free_model.field_kind = FieldKind::Complex; // the wave family lives in the complex equation
    double omega0 = need_double(p, "omega0");
    auto v_grid = symmetric_v_grid(get_double(p, "v_max_table", 0.4),
                                   static_cast<int>(get_int(p, "table_rows", 10)));
    SolitonFamilyTable table = tabulate_family(free_model, omega0, v_grid);
    {
        Csv csv(dir / "family.csv", "v,omega,P,E");
        for (const auto& r : table.rows) csv.row({r.v, r.omega, r.P, r.E});
    }
    EffectiveMassFit mass = fit_effective_mass(table);
    append_summary(summary, "effective_mass", mass.mass);
    append_summary(summary, "rest_energy", mass.rest_energy);
    append_summary(summary, "mass_fit_r2", mass.r2);

    double Pi0 = table.P_of_v(need_double(p, "v0"));
    EffectiveTrajectory eff = integrate_effective(table, model.external, q0, Pi0, 0.005,
                                                  need_double(p, "t_end"));
    {
        Csv csv(dir / "effective.csv", "t,Q,Pi");
        for (std::size_t i = 0; i < eff.times.size(); ++i)
            csv.row({eff.times[i], eff.Q[i], eff.Pi[i]});
    }
    append_summary(summary, "h_eff_drift", eff.h_drift);
    summary["effective_aborted"] = eff.aborted ? "true" : "false";

    AdiabaticConfig acfg;
    acfg.q0_hint = q0;
    acfg.window_halfwidth = halfwidth;
    AdiabaticReport rep;
    try {
        rep = compare_adiabatic(traj, eff, table, acfg);
    } catch (const std::exception& e) {
        summary["compare_failed"] = e.what();
        return;
    }
    {
        Csv csv(dir / "compare.csv", "t,q,Q,P,Pi");
        for (std::size_t i = 0; i < rep.times.size(); ++i)
            csv.row({rep.times[i], rep.q[i], rep.Q[i], rep.P[i], rep.Pi[i]});
    }
    append_summary(summary, "sup_q_err", rep.sup_q_err);
    append_summary(summary, "sup_P_err", rep.sup_P_err);
    summary["compare_truncated"] = rep.truncated ? "true" : "false";
    if (rep.truncated) append_summary(summary, "compare_loss_time", rep.loss_time);
    if (model.external.kind == ExternalPotential::Kind::Cosine)
        append_summary(summary, "adiabatic_parameter",
                       std::abs(model.external.amplitude * model.external.wavenumber));
    std::cout << "adiabatic: sup |q - Q| = " << format_double(rep.sup_q_err)
              << ", sup |P - Pi| = " << format_double(rep.sup_P_err) << "\n";
}

} // namespace

// ----------------------------------------------------------------- builders

Grid1D grid_from_params(const KeyValueMap& p) {
    return Grid1D::with_spacing(need_double(p, "x_min"), need_double(p, "x_max"),
                                need_double(p, "dx"));
}

ModelSpec model_from_params(const KeyValueMap& p) {
    std::string name = get_string(p, "model", "gl");
    std::string field = get_string(p, "field", "real");
    if (field != "real" && field != "complex")
        throw ConfigError("field must be real or complex (got '" + field + "')");
    FieldKind kind = field == "real" ? FieldKind::Real : FieldKind::Complex;

    ExternalPotential ext = ExternalPotential::zero();
    double v_amp = get_double(p, "v_amp", 0.0);
    if (v_amp != 0.0) ext = ExternalPotential::cosine(v_amp, need_double(p, "v_k"));

    if (name == "gl") {
        ModelSpec m = ModelSpec::ginzburg_landau();
        m.field_kind = kind;
        m.external = ext;
        return m;
    }
    if (name == "poly1" || name == "poly2" || name == "poly3")
        return ModelSpec::polynomial(Nonlinearity::row(name[4] - '0'), ext, kind);
    if (name == "linear") {
        ModelSpec m = ModelSpec::linear_kg(get_double(p, "mass2", 0.0), kind);
        m.external = ext;
        return m;
    }
    throw ConfigError("model must be gl, poly1..poly3, linear or string (got '" + name + "')");
}

FieldState initial_from_params(const KeyValueMap& p, const Grid1D& grid, const ModelSpec& model) {
    std::string init = get_string(p, "init", "");
    auto seed = static_cast<std::uint64_t>(get_int(p, "seed", 1));
    if (init == "kink_train" || init == "bumps") {
        return random_initial(seed, grid, need_double(p, "support_lo"),
                              need_double(p, "support_hi"), need_double(p, "amplitude"),
                              need_double(p, "smoothness"),
                              init == "bumps" ? RandomFieldKind::Bumps
                                              : RandomFieldKind::KinkTrain,
                              model.field_kind);
    }
    if (init == "kink") {
        KinkSpec spec;
        spec.a = get_double(p, "q0", 0.0);
        spec.v = get_double(p, "v0", 0.0);
        return kink_with_mode(spec, get_double(p, "mode_amplitude", 0.0),
                              get_double(p, "mode_phase", 0.0), grid);
    }
    if (init == "soliton") {
        SolitaryWaveProfile prof =
            solve_profile(model.nonlinearity, model.mass2, need_double(p, "omega0"));
        double q0 = get_double(p, "q0", 0.0);
        std::string pi_init = get_string(p, "pi_init", "rotating");
        if (pi_init == "zero") {
            if (model.field_kind != FieldKind::Real)
                throw ConfigError("pi_init=zero expects field=real");
            FieldState s = FieldState::zero(grid, FieldKind::Real);
            for (int k = 0; k < grid.n_points; ++k)
                s.psi[static_cast<std::size_t>(k)] = prof(grid.x(k) - q0);
            return s;
        }
        if (pi_init != "rotating")
            throw ConfigError("pi_init must be zero or rotating (got '" + pi_init + "')");
        if (model.field_kind != FieldKind::Complex)
            throw ConfigError("pi_init=rotating expects field=complex");
        return moving_soliton(prof, get_double(p, "v0", 0.0), q0, get_double(p, "theta0", 0.0),
                              grid);
    }
    throw ConfigError("init must be kink_train, bumps, kink or soliton (got '" + init + "')");
}

// --------------------------------------------------------------------- main

void run_experiment(KeyValueMap p, const std::string& out_dir) {
    if (get_string(p, "fidelity", "normal") == "high") {
        p["dx"] = "0.01";
        p["dt"] = "0.001";
        p["fidelity"] = "normal"; // manifest records the resolved resolution
    }

    fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string());
    save_config_file(p, (dir / "manifest.txt").string());

    std::string preset = get_string(p, "preset", "custom");
    std::cout << "[slab] " << preset << " -> " << dir.string() << "\n";

    if (preset == "spectrum_check") {
        run_spectrum_check(p, dir);
        return;
    }
    if (get_string(p, "model", "") == "string") {
        run_string(p, dir);
        return;
    }

    Grid1D grid = grid_from_params(p);
    ModelSpec model = model_from_params(p);
    FieldState init = initial_from_params(p, grid, model);

    IntegratorConfig cfg;
    cfg.dt = need_double(p, "dt");
    cfg.record_every = need_int(p, "record_every");
    cfg.boundary = boundary_from_params(p, init);

    Trajectory traj = run(std::move(init), model, cfg, need_double(p, "t_end"));

    write_observables(dir, traj);
    write_dumps(dir, traj, static_cast<int>(get_int(p, "dump_stride", 0)));
    write_heatmap(dir, traj, get_string(p, "heatmap", "bands"), get_double(p, "eps", 0.05));

    KeyValueMap summary;
    summary["frames"] = std::to_string(traj.frames());
    append_summary(summary, "energy_initial", traj.series("energy").front());
    append_summary(summary, "energy_final", traj.series("energy").back());

    if (preset == "fig4_kinks" || preset == "kink_kinematics")
        analyze_kink_run(p, dir, model, traj, summary);
    else if (preset == "soliton_decay")
        analyze_lump_run(p, dir, traj, summary);
    else if (preset == "fig7_adiabatic")
        analyze_adiabatic_run(p, dir, model, traj, summary);

    save_config_file(summary, (dir / "summary.txt").string());
    std::cout << "done: " << traj.frames() << " frames, E "
              << format_double(traj.series("energy").front()) << " -> "
              << format_double(traj.series("energy").back()) << "\n";
}

} // namespace slab::cli
