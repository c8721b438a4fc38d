#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

CliResult slab(const std::string& args) {
    static int counter = 0;
    fs::create_directories("cli_tmp");
    std::string log = "cli_tmp/log_" + std::to_string(counter++) + ".txt";
    std::string cmd = std::string(SLAB_CLI_PATH) + " " + args + " > " + log + " 2>&1";
    int ret = std::system(cmd.c_str());
    CliResult r;
    if (WIFEXITED(ret)) r.exit_code = WEXITSTATUS(ret);
    std::ifstream f(log);
    r.output.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(bool(f));
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

double value_after(const std::string& text, const std::string& key) {
    auto pos = text.find(key + " = ");
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + key.size() + 3));
}

// small, fast kink run used by several cases
const std::string kink_args = "--set x_min=-30 --set x_max=30 --set dx=0.02 --set dt=0.01 "
                              "--set t_end=4 --set record_every=50";

} // namespace

TEST_CASE("bad invocations exit with the configuration code") {
    CHECK(slab("").exit_code == 2);                  // missing subcommand
    CHECK(slab("frobnicate").exit_code == 2);        // unknown subcommand
    CHECK(slab("--help").exit_code == 0);

    CliResult r = slab("run definitely_not_a_preset --out cli_tmp/x");
    CHECK(r.exit_code == 2);

    r = slab("run kink_kinematics --set bogus_key=1 --set other_bad=2 --out cli_tmp/x");
    CHECK(r.exit_code == 2);
    CHECK(contains(r.output, "bogus_key"));
    CHECK(contains(r.output, "other_bad"));

    // no solitary wave in the first family row at this frequency
    r = slab("profile --model poly1 --omega 0.6");
    CHECK(r.exit_code == 2);
    CHECK(contains(r.output, "config error"));
}

TEST_CASE("profile subcommand prints the frozen profile constants") {
    fs::remove_all("cli_tmp/prof");
    fs::create_directories("cli_tmp/prof");
    CliResult r = slab("profile --model poly3 --omega 0.6 --out cli_tmp/prof/samples.csv");
    REQUIRE(r.exit_code == 0);
    CHECK(value_after(r.output, "peak_amplitude") == doctest::Approx(0.7539075234).epsilon(1e-7));
    CHECK(value_after(r.output, "decay_rate") == doctest::Approx(0.8).epsilon(1e-10));
    CHECK(value_after(r.output, "half_amplitude_width") == doctest::Approx(2.4073512387).epsilon(1e-5));
    CHECK(value_after(r.output, "residual_sup") < 1e-8);

    std::string csv = slurp("cli_tmp/prof/samples.csv");
    CHECK(csv.rfind("# x,phi\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') > 100);
}

TEST_CASE("spectrum subcommand reports the well eigenvalues") {
    CliResult r = slab("spectrum --potential sech2 --depth 6 --x-max 25 --dx 0.02");
    REQUIRE(r.exit_code == 0);
    CHECK(value_after(r.output, "n_eigenvalues") == 2);
    CHECK(value_after(r.output, "lambda_0") == doctest::Approx(-4.0).epsilon(1e-3));
    CHECK(value_after(r.output, "lambda_1") == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK(contains(r.output, "edge_warning = false"));
}

TEST_CASE("effective subcommand tabulates and fits the family") {
    fs::remove_all("cli_tmp/eff");
    fs::create_directories("cli_tmp/eff");
    CliResult r = slab("effective --model poly3 --omega 0.6 --v-max 0.3 --rows 6 "
                       "--out cli_tmp/eff/family.csv");
    REQUIRE(r.exit_code == 0);
    CHECK(value_after(r.output, "rows") == 13);
    double mass = value_after(r.output, "effective_mass");
    double e0 = value_after(r.output, "rest_energy");
    CHECK(e0 == doctest::Approx(0.755351).epsilon(1e-3));
    CHECK(std::abs(mass - e0) / e0 < 0.02);
    CHECK(value_after(r.output, "r2") > 0.999);
    std::string csv = slurp("cli_tmp/eff/family.csv");
    CHECK(csv.rfind("# v,omega,P,E\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 14); // schema + 13 rows
}

TEST_CASE("a run leaves a complete, reproducible artifact set") {
    fs::remove_all("cli_tmp/runA");
    fs::remove_all("cli_tmp/runB");
    CliResult r = slab("run kink_kinematics " + kink_args + " --out cli_tmp/runA");
    REQUIRE(r.exit_code == 0);
    fs::path dir = "cli_tmp/runA/kink_kinematics-s1";
    REQUIRE(fs::is_directory(dir));
    for (const char* f : {"manifest.txt", "observables.csv", "summary.txt", "heatmap.ppm",
                          "state_000000.slab", "tracks.csv"})
        CHECK(fs::exists(dir / f));

    // the manifest re-runs to byte-identical observables
    CliResult r2 =
        slab("run --config " + (dir / "manifest.txt").string() + " --out cli_tmp/runB");
    REQUIRE(r2.exit_code == 0);
    fs::path dir2 = "cli_tmp/runB/kink_kinematics-s1";
    CHECK(slurp(dir / "observables.csv") == slurp(dir2 / "observables.csv"));
    CHECK(slurp(dir / "manifest.txt") == slurp(dir2 / "manifest.txt"));
    CHECK(slurp(dir / "summary.txt") == slurp(dir2 / "summary.txt"));

    // the observables file carries its schema line
    std::string obs = slurp(dir / "observables.csv");
    CHECK(obs.rfind("# t,", 0) == 0);

    // heatmap is a P6 pixmap
    CHECK(slurp(dir / "heatmap.ppm").rfind("P6\n", 0) == 0);
}

TEST_CASE("inspect prints the dump header fields") {
    fs::path dump = "cli_tmp/runA/kink_kinematics-s1/state_000000.slab";
    REQUIRE(fs::exists(dump)); // produced by the previous case
    CliResult r = slab("inspect " + dump.string());
    REQUIRE(r.exit_code == 0);
    CHECK(contains(r.output, "version = 1"));
    CHECK(contains(r.output, "field = real"));
    CHECK(contains(r.output, "encoding = f64"));
    CHECK(contains(r.output, "n_points = 3001"));
    CHECK(contains(r.output, "x_min = -30"));
    CHECK(contains(r.output, "x_max = 30"));

    CHECK(slab("inspect cli_tmp/no_such.slab").exit_code == 2);
}

TEST_CASE("analyze detects the kink in a finished run") {
    fs::path dir = "cli_tmp/runA/kink_kinematics-s1";
    REQUIRE(fs::is_directory(dir));
    CliResult r = slab("analyze " + dir.string());
    REQUIRE(r.exit_code == 0);
    CHECK(contains(r.output, "kinks=1"));
    std::string csv = slurp(dir / "kinks.csv");
    CHECK(csv.rfind("# file,t,position,orientation,band_left,band_right,unresolved\n", 0) == 0);
    CHECK(contains(csv, "state_000000.slab"));

    CHECK(slab("analyze cli_tmp/definitely_missing_dir").exit_code == 2);
}

TEST_CASE("sweep runs every seed and reports the tally") {
    fs::remove_all("cli_tmp/sweep");
    std::string shrink = "--set x_min=-30 --set x_max=30 --set dx=0.05 --set dt=0.02 "
                         "--set t_end=2 --set record_every=20 --set support_lo=-15 "
                         "--set support_hi=15 --set fit_t_lo=0 --set fit_t_hi=2 "
                         "--set edge_margin=2 --set ridge_exclusion=5";
    CliResult r = slab("sweep fig4_kinks --seeds 3,4 --jobs 2 " + shrink + " --out cli_tmp/sweep");
    REQUIRE(r.exit_code == 0);
    CHECK(contains(r.output, "sweep: 2/2 runs ok"));
    REQUIRE(fs::is_directory("cli_tmp/sweep/fig4_kinks-s3"));
    REQUIRE(fs::is_directory("cli_tmp/sweep/fig4_kinks-s4"));
    // different seeds draw different initial data
    CHECK(slurp("cli_tmp/sweep/fig4_kinks-s3/observables.csv") !=
          slurp("cli_tmp/sweep/fig4_kinks-s4/observables.csv"));

    CHECK(slab("sweep fig4_kinks --seeds nonsense --out cli_tmp/sweep").exit_code == 2);
}

TEST_CASE("an unstable run exits with the numerical-abort code") {
    fs::remove_all("cli_tmp/blow");
    CliResult r = slab("run fig4_kinks --set amplitude=30 --set x_min=-20 --set x_max=20 "
                       "--set dx=0.05 --set dt=0.04 --set t_end=5 --set support_lo=-10 "
                       "--set support_hi=10 --set record_every=10 --out cli_tmp/blow");
    CHECK(r.exit_code == 3);
    CHECK(contains(r.output, "numerical abort"));
}
