#pragma once

#include "slab/effective.hpp"
#include "slab/grid.hpp"
#include "slab/integrate.hpp"
#include "slab/model.hpp"

#include <cstddef>
#include <vector>

namespace slab {

/** Three-band classification threshold: red psi > 1+eps, blue psi < -1-eps,
 *  yellow |psi| < 1-eps, white near-vacuum. */
struct BandConfig {
    double epsilon = 0.05;

    void validate() const;
};

struct KinkDetection {
    double position = 0.0;   // interpolated zero crossing
    int orientation = +1;    // sign of the slope at the crossing
    double band_left = 0.0;  // yellow-band edges
    double band_right = 0.0;
    bool unresolved = false; // band shares several sign changes or is too wide
};

/** Kinks of a real field connecting the vacua +-1: maximal intervals where
 *  |psi| < 1-eps, qualified by their sign changes. */
std::vector<KinkDetection> detect_kinks(const FieldState& state, const BandConfig& bands = {});

struct KinkTrack {
    struct Track {
        std::size_t first_frame = 0;
        int orientation = +1;
        std::vector<double> positions; // one entry per frame from first_frame on
        std::vector<double> widths;    // half-amplitude width series
        std::vector<double> internal_phase; // psi sampled one unit right of the center
        double velocity = 0.0;         // least-squares slope over the whole life
        double velocity_stderr = 0.0;
        double fit_residual = 0.0;     // max |position - line|
        bool alive = false;            // still present in the final frame

        std::size_t frames() const { return positions.size(); }
        std::size_t last_frame() const { return first_frame + positions.size() - 1; }
    };
    struct Event {
        enum class Kind { Birth, Death };
        Kind kind;
        double time;
        double position;
    };

    std::vector<double> times;
    std::vector<Track> tracks;
    std::vector<Event> events;
};

/** Frame-to-frame nearest-neighbor association (same orientation, 10 dx gate
 *  by default); unmatched tracks end, unmatched detections are born. */
KinkTrack track(const Trajectory& traj, const BandConfig& bands = {}, double gate_factor = 10.0);

enum class StructureKind { Kink, Soliton };

struct WidthMeasurement {
    double width = 0.0;          // full width at half the peak deviation
    double peak_deviation = 0.0; // kinks: 1 - |psi|; solitons: |psi|
    double peak_position = 0.0;
    double left_half = 0.0, right_half = 0.0; // interpolated crossing abscissas
};

/** Full width at half of the local extremal deviation from the vacuum near
 *  `center`: for kinks where 1-|psi| crosses half its max (the max is 1 at a
 *  sign change), for solitons where |psi| crosses peak/2. Width is NaN when a
 *  half crossing runs off the grid. */
WidthMeasurement measure_width(const FieldState& state, double center, StructureKind kind);

struct OscillationEstimate {
    double angular_frequency = 0.0; // 2 pi / period
    double period = 0.0;            // mean spacing of same-direction extrema
    double period_stderr = 0.0;     // standard error of the period samples
    double amplitude = 0.0;         // mean |detrended extremum|
    int n_periods = 0;
    std::vector<double> turning_times;
    std::vector<double> turning_values; // original (not detrended) values
};

/** Oscillation frequency from extrema spacing after linear detrending;
 *  extrema refined by local parabolas. */
OscillationEstimate measure_oscillation(const std::vector<double>& times,
                                        const std::vector<double>& values);

struct RidgeConfig {
    double threshold = 0.02;     // min mean deviation along an accepted line
    double vacuum_abs = 1.0;     // deviation = | |psi| - vacuum_abs |
    double exclusion_radius = 0.0;
    const KinkTrack* exclude = nullptr; // cells near these tracks are masked
    double edge_margin = 0.0;    // additionally mask |x| > x_max - margin
    double speed_min = -0.995, speed_max = 0.995, speed_step = 0.005;
    double intercept_step = 0.5;
    double min_span = 0.5;       // line must stay in-domain for this fraction of frames
};

/** Straight-ridge speeds of the space-time deviation array: a Hough scan over
 *  (speed, intercept) lines, local maxima above threshold, nearby candidates
 *  merged. Returns speeds ordered by descending ridge score. */
std::vector<double> ridge_speeds(const Trajectory& traj, const RidgeConfig& cfg = {});

struct ManifoldFit {
    double omega = 0.0, v = 0.0, q = 0.0, theta = 0.0;
    double residual = 0.0;    // local L2 distance of (psi, pi) to the fitted soliton
    double state_norm = 0.0;  // local L2 norm of the state over the same window
    bool off_manifold = false;
};

/** Least-squares projection onto the solitary manifold: minimizes the local
 *  L2 distance over (omega, v, q, theta) by coarse grid search plus
 *  coordinate descent; theta is eliminated in closed form. */
ManifoldFit fit_manifold(const FieldState& state, const SolitonFamilyTable& family,
                         double window_radius = 15.0);

/** Descent-only refinement from a previous fit (for frame-by-frame use). */
ManifoldFit refine_manifold_fit(const FieldState& state, const SolitonFamilyTable& family,
                                const ManifoldFit& start, double window_radius = 15.0);

struct ConvergenceReport {
    std::vector<double> times;
    std::vector<double> distances; // local_l2_distance(snapshot, limit, R)
    double decreasing_fraction = 0.0;
};

ConvergenceReport convergence_report(const Trajectory& traj, const FieldState& limit, double R);

struct SolitonTrack {
    std::vector<double> times;
    std::vector<double> positions; // energy-density centroid in a moving window
    std::vector<double> peaks;     // max |psi| in the window
    std::vector<double> envelopes; // trailing max of the peak series
    std::vector<double> widths;    // NaN at frames where the peak is far below the envelope
    bool lost = false;
    double loss_time = 0.0;
};

/** Follow a single localized structure by the centroid of its energy density
 *  in a window of the given halfwidth around the previous position; tracking
 *  is lost when the centroid jumps more than continuity_gate between frames.
 *  Width samples are taken only at frames whose peak reaches
 *  width_gate_fraction of the trailing envelope (an oscillating real
 *  structure has no width near its zero phase). */
SolitonTrack track_soliton(const Trajectory& traj, const ModelSpec& model, double q0_hint,
                           double window_halfwidth = 14.0, double continuity_gate = 3.0,
                           double envelope_window = 8.0, double width_gate_fraction = 0.75);

struct SeriesReport {
    std::vector<double> times;
    std::vector<double> values;
};

/** Energy integrated over the nodes farther than `radius` from every live
 *  track position (and outside `edge_margin` of the ends). */
SeriesReport outside_energy_series(const Trajectory& traj, const ModelSpec& model,
                                   const KinkTrack& tracks, double radius,
                                   double edge_margin = 0.0);

struct LineFit {
    double slope = 0.0, intercept = 0.0;
    double max_residual = 0.0;
    double slope_stderr = 0.0;
};

LineFit linear_fit(const std::vector<double>& t, const std::vector<double>& y);

/** Linear interpolation helpers on field nodes. */
double interp_psi_re(const FieldState& state, double x);
double interp_abs_psi(const FieldState& state, double x);

} // namespace slab
