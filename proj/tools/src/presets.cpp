#include "presets.hpp"

#include "slab/errors.hpp"

namespace slab::cli {

std::vector<std::string> preset_names() {
    return {"fig4_kinks",      "soliton_decay",  "fig7_adiabatic",
            "kink_kinematics", "spectrum_check", "string_attraction"};
}

std::string preset_blurb(const std::string& name) {
    if (name == "fig4_kinks") return "random kink gas: annihilation, escape velocities, radiation ridges";
    if (name == "soliton_decay") return "random complex field settling onto solitary waves";
    if (name == "fig7_adiabatic") return "solitary wave drifting in a weak cosine potential vs effective dynamics";
    if (name == "kink_kinematics") return "single (optionally moving) kink with its shape mode excited";
    if (name == "spectrum_check") return "discrete spectrum of the linearization around the kink";
    if (name == "string_attraction") return "wave on a string coupled to a point oscillator, relaxing to a stationary state";
    throw ConfigError("unknown preset '" + name + "'");
}

KeyValueMap preset_defaults(const std::string& name) {
    KeyValueMap p;
    p["preset"] = name;
    p["seed"] = "1";
    p["field"] = "real";
    p["record_every"] = "200";
    p["eps"] = "0.05";
    p["dump_stride"] = "0"; // frames between state dumps; 0 = first and last only
    p["heatmap"] = "bands";

    if (name == "fig4_kinks") {
        p["model"] = "gl";
        p["x_min"] = "-200";
        p["x_max"] = "200";
        p["dx"] = "0.01";
        p["dt"] = "0.001";
        p["t_end"] = "100";
        p["boundary"] = "dirichlet";
        p["init"] = "kink_train";
        p["support_lo"] = "-20";
        p["support_hi"] = "20";
        p["amplitude"] = "0.4";
        p["smoothness"] = "2";
        p["fit_t_lo"] = "70";
        p["fit_t_hi"] = "100";
        p["ridge_threshold"] = "0.02";
        p["ridge_exclusion"] = "15";
        p["edge_margin"] = "5";
        p["outside_radius"] = "25";
        return p;
    }
    if (name == "soliton_decay") {
        p["model"] = "poly1";
        p["field"] = "complex";
        p["x_min"] = "-100";
        p["x_max"] = "100";
        p["dx"] = "0.01";
        p["dt"] = "0.001";
        p["t_end"] = "150";
        p["record_every"] = "500";
        p["boundary"] = "sponge";
        p["sponge_width"] = "20";
        p["sponge_strength"] = "5";
        p["init"] = "bumps";
        p["support_lo"] = "-20";
        p["support_hi"] = "20";
        p["amplitude"] = "1.2";
        p["smoothness"] = "1.5";
        p["heatmap"] = "magnitude";
        p["peak_floor"] = "0.3"; // |psi| needed to count a surviving lump
        p["peak_gap"] = "2";
        return p;
    }
    if (name == "fig7_adiabatic") {
        p["model"] = "poly3";
        p["x_min"] = "-100";
        p["x_max"] = "100";
        p["dx"] = "0.05";
        p["dt"] = "0.005";
        p["t_end"] = "1000";
        p["record_every"] = "100";
        p["boundary"] = "sponge";
        p["sponge_width"] = "20";
        p["sponge_strength"] = "5";
        p["init"] = "soliton";
        p["omega0"] = "0.6";
        p["q0"] = "5";
        p["v0"] = "0";
        p["theta0"] = "0";
        p["pi_init"] = "zero"; // real snapshot, zero velocity field (off the wave manifold)
        p["v_amp"] = "-0.2";
        p["v_k"] = "0.31";
        p["heatmap"] = "magnitude";
        p["effective_compare"] = "true";
        p["window_halfwidth"] = "14";
        p["v_max_table"] = "0.6";
        p["table_rows"] = "10"; // half-count; symmetric grid gets 2n+1 rows
        p["fidelity"] = "normal"; // high -> dx=0.01, dt=0.001 (long runs)
        return p;
    }
    if (name == "kink_kinematics") {
        p["model"] = "gl";
        p["x_min"] = "-60";
        p["x_max"] = "60";
        p["dx"] = "0.01";
        p["dt"] = "0.005";
        p["t_end"] = "40";
        p["record_every"] = "20";
        p["boundary"] = "dirichlet";
        p["init"] = "kink";
        p["q0"] = "0";
        p["v0"] = "0.5";
        p["mode_amplitude"] = "0.01";
        p["mode_phase"] = "0";
        p["outside_radius"] = "25";
        return p;
    }
    if (name == "spectrum_check") {
        p["model"] = "gl";
        p["x_min"] = "-40";
        p["x_max"] = "40";
        p["dx"] = "0.01";
        p["potential"] = "kink"; // or sech2:<depth>
        p["below"] = "1.99";
        // no time integration; the shared keys below are accepted but unused
        p["dt"] = "0.01";
        p["t_end"] = "0";
        return p;
    }
    if (name == "string_attraction") {
        p["model"] = "string";
        p["x_min"] = "-60";
        p["x_max"] = "60";
        p["dx"] = "0.01";
        p["dt"] = "0.005";
        p["t_end"] = "80";
        p["record_every"] = "100";
        p["boundary"] = "sponge";
        p["sponge_width"] = "10";
        p["sponge_strength"] = "5";
        p["init"] = "bumps";
        p["support_lo"] = "-10";
        p["support_hi"] = "10";
        p["amplitude"] = "1";
        p["smoothness"] = "1.5";
        p["coupling_x"] = "0";
        p["osc_force"] = "cubic"; // F(y) = y - y^3
        p["heatmap"] = "magnitude";
        return p;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

} // namespace slab::cli
