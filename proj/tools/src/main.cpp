#include "presets.hpp"
#include "run_experiment.hpp"

#include "slab/config.hpp"
#include "slab/diagnostics.hpp"
#include "slab/dump.hpp"
#include "slab/effective.hpp"
#include "slab/errors.hpp"
#include "slab/profile.hpp"
#include "slab/spectral.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>

namespace fs = std::filesystem;
using namespace slab;
using namespace slab::cli;

namespace {

std::string resolve_out_base(const std::string& cli_out) {
    if (!cli_out.empty()) return cli_out;
    if (const char* env = std::getenv("SLAB_OUT_DIR")) return env;
    return "runs";
}

KeyValueMap resolve_params(const std::string& preset, const std::string& config_path,
                           const std::vector<std::string>& sets) {
    KeyValueMap p;
    if (!config_path.empty()) {
        p = load_config_file(config_path);
        if (!p.count("preset")) throw ConfigError(config_path + ": missing 'preset' key");
        // validate the file against the preset's key set
        KeyValueMap defaults = preset_defaults(p.at("preset"));
        for (const auto& [k, v] : p)
            if (!defaults.count(k))
                throw ConfigError(config_path + ": unknown parameter '" + k + "'");
        for (const auto& [k, v] : defaults)
            if (!p.count(k)) p[k] = v;
    } else {
        p = preset_defaults(preset);
    }
    std::set<std::string> allowed;
    for (const auto& [k, v] : p) allowed.insert(k);
    allowed.erase("preset");
    apply_overrides(p, sets, allowed);
    return p;
}

std::string run_dir_for(const std::string& base, const KeyValueMap& p) {
    return base + "/" + p.at("preset") + "-s" + get_string(p, "seed", "0");
}

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
    std::vector<std::uint64_t> seeds;
    auto parse_one = [](const std::string& s) {
        try {
            std::size_t pos = 0;
            std::uint64_t v = std::stoull(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("bad seed '" + s + "'");
        }
    };
    auto dots = spec.find("..");
    if (dots != std::string::npos) {
        std::uint64_t a = parse_one(spec.substr(0, dots));
        std::uint64_t b = parse_one(spec.substr(dots + 2));
        if (b < a || b - a > 10000) throw ConfigError("bad seed range '" + spec + "'");
        for (std::uint64_t s = a; s <= b; ++s) seeds.push_back(s);
        return seeds;
    }
    std::size_t start = 0;
    while (start <= spec.size()) {
        auto comma = spec.find(',', start);
        if (comma == std::string::npos) comma = spec.size();
        if (comma > start) seeds.push_back(parse_one(spec.substr(start, comma - start)));
        start = comma + 1;
    }
    if (seeds.empty()) throw ConfigError("no seeds in '" + spec + "'");
    return seeds;
}

Nonlinearity nonlinearity_by_name(const std::string& model) {
    if (model == "gl") return Nonlinearity::ginzburg_landau();
    if (model == "poly1" || model == "poly2" || model == "poly3")
        return Nonlinearity::row(model[4] - '0');
    throw ConfigError("model must be gl or poly1..poly3 (got '" + model + "')");
}

double model_mass2(const std::string& model) { return model == "gl" ? 0.0 : 1.0; }

int cmd_run(const std::string& preset, const std::string& config_path,
            const std::vector<std::string>& sets, const std::string& out, bool fidelity) {
    std::vector<std::string> all_sets = sets;
    if (fidelity) all_sets.push_back("fidelity=high");
    KeyValueMap p = resolve_params(preset, config_path, all_sets);
    run_experiment(p, run_dir_for(resolve_out_base(out), p));
    return 0;
}

int cmd_sweep(const std::string& preset, const std::string& seeds_spec,
              const std::vector<std::string>& sets, const std::string& out, int jobs) {
    auto seeds = parse_seeds(seeds_spec);
    KeyValueMap base = resolve_params(preset, "", sets); // validates overrides up front
    (void)base;
    std::string out_base = resolve_out_base(out);
    if (jobs <= 0) jobs = std::max(1u, std::thread::hardware_concurrency() / 2);
    jobs = std::min<int>(jobs, static_cast<int>(seeds.size()));

    std::atomic<std::size_t> next{0};
    std::vector<int> status(seeds.size(), 0);
    std::mutex io;
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= seeds.size()) return;
            std::vector<std::string> s = sets;
            s.push_back("seed=" + std::to_string(seeds[i]));
            try {
                KeyValueMap p = resolve_params(preset, "", s);
                run_experiment(p, run_dir_for(out_base, p));
            } catch (const ConfigError& e) {
                std::lock_guard<std::mutex> lk(io);
                std::cerr << "seed " << seeds[i] << ": config error: " << e.what() << "\n";
                status[i] = 2;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(io);
                std::cerr << "seed " << seeds[i] << ": " << e.what() << "\n";
                status[i] = 3;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    int failed = 0, rc = 0;
    for (std::size_t i = 0; i < seeds.size(); ++i)
        if (status[i] != 0) {
            ++failed;
            rc = std::max(rc, status[i]);
        }
    std::cout << "sweep: " << (seeds.size() - failed) << "/" << seeds.size() << " runs ok\n";
    return rc;
}

int cmd_profile(const std::string& model, double omega, double tol, const std::string& out) {
    SolitaryWaveProfile prof = solve_profile(nonlinearity_by_name(model), model_mass2(model),
                                             omega, tol);
    std::cout << "omega = " << format_double(prof.omega) << "\n"
              << "peak_amplitude = " << format_double(prof.peak_amplitude) << "\n"
              << "decay_rate = " << format_double(prof.decay_rate) << "\n"
              << "half_amplitude_width = " << format_double(prof.half_amplitude_width) << "\n"
              << "residual_sup = " << format_double(prof.residual_sup) << "\n"
              << "x_cut = " << format_double(prof.x_cut()) << "\n";
    if (!out.empty()) {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw ConfigError("cannot open for writing: " + out);
        f << "# x,phi\n";
        for (std::size_t i = 0; i < prof.x.size(); ++i)
            f << format_double(prof.x[i]) << "," << format_double(prof.phi[i]) << "\n";
        std::cout << "wrote " << out << " (" << prof.x.size() << " samples, x >= 0 half)\n";
    }
    return 0;
}

int cmd_spectrum(const std::string& potential, double depth, double x_max, double dx,
                 double below, bool below_set, const std::string& out) {
    Grid1D grid = Grid1D::with_spacing(-x_max, x_max, dx);
    SchrodingerOperator1D op;
    if (potential == "kink") {
        op = kink_linearization(grid);
        if (!below_set) below = 1.99;
    } else if (potential == "sech2") {
        op.grid = grid;
        op.V.resize(static_cast<std::size_t>(grid.n_points));
        for (int k = 0; k < grid.n_points; ++k) {
            double c = std::cosh(grid.x(k));
            op.V[static_cast<std::size_t>(k)] = -depth / (c * c);
        }
        if (!below_set) below = -1e-3;
    } else {
        throw ConfigError("potential must be kink or sech2 (got '" + potential + "')");
    }
    SpectrumResult spec = discrete_spectrum(op, below);
    std::cout << "n_eigenvalues = " << spec.eigenvalues.size() << "\n"
              << "margin = " << format_double(spec.margin) << "\n"
              << "edge_warning = " << (spec.edge_warning ? "true" : "false") << "\n";
    for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i)
        std::cout << "lambda_" << i << " = " << format_double(spec.eigenvalues[i]) << "\n";
    if (!out.empty()) {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw ConfigError("cannot open for writing: " + out);
        f << "# index,eigenvalue\n";
        for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i)
            f << i << "," << format_double(spec.eigenvalues[i]) << "\n";
    }
    return 0;
}

int cmd_effective(const std::string& model, double omega, double v_max, int rows,
                  const std::string& out) {
    ModelSpec spec = ModelSpec::polynomial(nonlinearity_by_name(model));
    SolitonFamilyTable table = tabulate_family(spec, omega, symmetric_v_grid(v_max, rows));
    EffectiveMassFit fit = fit_effective_mass(table, std::min(0.2, v_max));
    std::cout << "rows = " << table.rows.size() << "\n"
              << "effective_mass = " << format_double(fit.mass) << "\n"
              << "rest_energy = " << format_double(fit.rest_energy) << "\n"
              << "r2 = " << format_double(fit.r2) << "\n";
    for (const auto& n : table.notices) std::cout << "notice: " << n << "\n";
    if (!out.empty()) {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw ConfigError("cannot open for writing: " + out);
        f << "# v,omega,P,E\n";
        for (const auto& r : table.rows)
            f << format_double(r.v) << "," << format_double(r.omega) << ","
              << format_double(r.P) << "," << format_double(r.E) << "\n";
    }
    return 0;
}

int cmd_analyze(const std::string& dir, double eps) {
    if (!fs::is_directory(dir)) throw ConfigError("not a directory: " + dir);
    std::vector<std::string> dumps;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".slab") dumps.push_back(e.path().string());
    std::sort(dumps.begin(), dumps.end());
    if (dumps.empty()) throw ConfigError("no .slab dumps in " + dir);

    BandConfig bands;
    bands.epsilon = eps;
    std::ofstream f(fs::path(dir) / "kinks.csv", std::ios::binary);
    if (!f) throw ConfigError("cannot open for writing: " + dir + "/kinks.csv");
    f << "# file,t,position,orientation,band_left,band_right,unresolved\n";
    int n_real = 0;
    for (const auto& path : dumps) {
        FieldState s = read_dump(path);
        if (s.kind != FieldKind::Real) continue;
        ++n_real;
        for (const auto& d : detect_kinks(s, bands))
            f << fs::path(path).filename().string() << "," << format_double(s.time) << ","
              << format_double(d.position) << "," << d.orientation << ","
              << format_double(d.band_left) << "," << format_double(d.band_right) << ","
              << (d.unresolved ? 1 : 0) << "\n";
        std::cout << fs::path(path).filename().string() << ": t=" << format_double(s.time)
                  << " kinks=" << detect_kinks(s, bands).size() << "\n";
    }
    if (n_real == 0) std::cout << "no real-field dumps; kinks.csv is empty\n";
    return 0;
}

int cmd_inspect(const std::string& path) {
    DumpHeader h = inspect_dump(path);
    std::cout << "file = " << path << "\n"
              << "version = " << h.version << "\n"
              << "field = " << (h.kind_code == 0 ? "real" : "complex") << "\n"
              << "encoding = " << (h.encoding == 0 ? "f64" : "?") << "\n"
              << "n_points = " << h.n_points << "\n"
              << "x_min = " << format_double(h.x_min) << "\n"
              << "x_max = " << format_double(h.x_max) << "\n"
              << "t = " << format_double(h.time) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"slab: a laboratory for 1D Hamiltonian field dynamics"};
    app.require_subcommand(1);
    int rc = 0;

    std::string preset_help = "Preset experiment; one of:";
    for (const auto& n : preset_names()) preset_help += "\n  " + n + "  (" + preset_blurb(n) + ")";

    // run
    auto* run = app.add_subcommand("run", "run one experiment and write its artifacts");
    static std::string r_preset, r_config, r_out;
    static std::vector<std::string> r_sets;
    static bool r_fidelity = false;
    run->add_option("preset", r_preset, preset_help);
    run->add_option("--config", r_config, "run from an existing manifest instead of a preset");
    run->add_option("--set", r_sets, "override a parameter, key=value (repeatable)");
    run->add_option("--out", r_out, "output base directory (default $SLAB_OUT_DIR or ./runs)");
    run->add_flag("--fidelity", r_fidelity, "high-resolution variant (dx=0.01, dt=0.001)");
    run->callback([&] {
        if (r_preset.empty() && r_config.empty())
            throw ConfigError("run: give a preset name or --config FILE");
        rc = cmd_run(r_preset, r_config, r_sets, r_out, r_fidelity);
    });

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run one preset over many seeds in parallel");
    static std::string s_preset, s_seeds = "0..7", s_out;
    static std::vector<std::string> s_sets;
    static int s_jobs = 0;
    sweep->add_option("preset", s_preset, preset_help)->required();
    sweep->add_option("--seeds", s_seeds, "seed list '1,2,5' or range '0..9' (default 0..7)");
    sweep->add_option("--set", s_sets, "override a parameter, key=value (repeatable)");
    sweep->add_option("--out", s_out, "output base directory");
    sweep->add_option("--jobs", s_jobs, "worker threads (default: half the cores)");
    sweep->callback([&] { rc = cmd_sweep(s_preset, s_seeds, s_sets, s_out, s_jobs); });

    // profile
    auto* prof = app.add_subcommand("profile", "solve a solitary-wave amplitude profile");
    static std::string p_model = "poly3", p_out;
    static double p_omega = 0.6, p_tol = 1e-9;
    prof->add_option("--model", p_model, "poly1, poly2 or poly3 (default poly3)");
    prof->add_option("--omega", p_omega, "internal frequency (default 0.6)");
    prof->add_option("--tol", p_tol, "profile tolerance (default 1e-9)");
    prof->add_option("--out", p_out, "write x,phi samples to this CSV");
    prof->callback([&] { rc = cmd_profile(p_model, p_omega, p_tol, p_out); });

    // spectrum
    auto* spec = app.add_subcommand("spectrum", "discrete spectrum of a Schrodinger operator");
    static std::string sp_pot = "kink", sp_out;
    static double sp_depth = 2.0, sp_xmax = 40.0, sp_dx = 0.01, sp_below = 0.0;
    spec->add_option("--potential", sp_pot, "kink (linearization) or sech2 (default kink)");
    spec->add_option("--depth", sp_depth, "well depth for sech2 (default 2)");
    spec->add_option("--x-max", sp_xmax, "half domain length (default 40)");
    spec->add_option("--dx", sp_dx, "grid spacing (default 0.01)");
    auto* below_opt = spec->add_option("--below", sp_below, "search threshold (default: band edge)");
    spec->add_option("--out", sp_out, "write index,eigenvalue CSV");
    spec->callback([&] {
        rc = cmd_spectrum(sp_pot, sp_depth, sp_xmax, sp_dx, sp_below, below_opt->count() > 0,
                          sp_out);
    });

    // effective
    auto* eff = app.add_subcommand("effective", "tabulate a boost family and fit its mass");
    static std::string e_model = "poly3", e_out;
    static double e_omega = 0.6, e_vmax = 0.4;
    static int e_rows = 10;
    eff->add_option("--model", e_model, "poly1, poly2 or poly3 (default poly3)");
    eff->add_option("--omega", e_omega, "internal frequency (default 0.6)");
    eff->add_option("--v-max", e_vmax, "largest tabulated speed (default 0.4)");
    eff->add_option("--rows", e_rows, "velocities per side (default 10)");
    eff->add_option("--out", e_out, "write v,omega,P,E CSV");
    eff->callback([&] { rc = cmd_effective(e_model, e_omega, e_vmax, e_rows, e_out); });

    // analyze
    auto* ana = app.add_subcommand("analyze", "detect kinks in the dumps of a finished run");
    static std::string a_dir;
    static double a_eps = 0.05;
    ana->add_option("dir", a_dir, "run directory containing .slab dumps")->required();
    ana->add_option("--eps", a_eps, "band threshold (default 0.05)");
    ana->callback([&] { rc = cmd_analyze(a_dir, a_eps); });

    // inspect
    auto* ins = app.add_subcommand("inspect", "print the header of a field dump");
    static std::string i_path;
    ins->add_option("file", i_path, "dump file")->required();
    ins->callback([&] { rc = cmd_inspect(i_path); });

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            int code = app.exit(e);
            return code == 0 ? 0 : 2;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalAbort& e) {
        std::cerr << "numerical abort: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return rc;
}
