#pragma once

#include "slab/grid.hpp"
#include "slab/integrate.hpp"
#include "slab/model.hpp"
#include "slab/profile.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace slab {

struct FamilyRow {
    double v = 0.0;     // boost velocity
    double omega = 0.0; // internal frequency
    double P = 0.0;     // field momentum of the moving soliton
    double E = 0.0;     // field energy of the moving soliton
};

/** Energy-momentum curve of the boost family of one solitary-wave profile,
 *  plus a profile cache over a frequency window for manifold fitting. */
struct SolitonFamilyTable {
    ModelSpec model; // free model: external potential ignored when tabulating
    double base_omega = 0.0;
    double profile_tol = 1e-9;
    std::vector<FamilyRow> rows; // sorted by v; P strictly increasing
    double omega_lo = 0.0, omega_hi = 0.0;
    std::vector<std::string> notices; // skipped frequencies etc.

    /** Profile at the given frequency, solved on demand and cached
     *  (keyed at 1e-6 granularity). */
    const SolitaryWaveProfile& profile(double omega) const;
    bool spans(double omega) const { return omega >= omega_lo && omega <= omega_hi; }

    double P_of_v(double v) const;
    double E_of_v(double v) const;
    double v_of_P(double P) const;
    double E_of_P(double P) const;
    double dE_dP(double P) const;
    double P_min() const { return rows.front().P; }
    double P_max() const { return rows.back().P; }

  private:
    mutable std::map<long long, std::shared_ptr<const SolitaryWaveProfile>> cache_;
};

/** Build the (v, P, E) table by constructing each moving soliton on a fine
 *  auxiliary grid and evaluating energy and momentum with no external
 *  potential. Checks that P is strictly increasing in v. The profile cache
 *  window [omega_lo, omega_hi] is primed lazily; frequencies where the
 *  profile solve fails are recorded in notices. */
SolitonFamilyTable tabulate_family(const ModelSpec& model, double omega,
                                   const std::vector<double>& v_grid, double omega_lo = 0.0,
                                   double omega_hi = 0.0, double profile_tol = 1e-9);

/** Evenly spaced velocities in [-v_max, v_max]. */
std::vector<double> symmetric_v_grid(double v_max, int n_half);

struct EffectiveMassFit {
    double mass = 0.0;        // M in E = E0 + P^2/(2M)
    double rest_energy = 0.0; // fitted E0
    double r2 = 0.0;
};

/** Quadratic least-squares fit of E against P^2 on the |v| <= v_cut rows.
 *  Throws NumericalAbort when R^2 < 0.99. */
EffectiveMassFit fit_effective_mass(const SolitonFamilyTable& table, double v_cut = 0.2);

struct EffectiveTrajectory {
    std::vector<double> times, Q, Pi;
    double h_drift = 0.0; // max |H_eff(t) - H_eff(0)|
    bool aborted = false; // momentum left the tabulated range
    double abort_time = 0.0;
};

/** Potential felt by the wave as a function of its center: the restriction of
 *  the coupling energy (1/2) ∫ V(x) |φ(x-Q)|² dx to the family. A cosine maps
 *  to a cosine with attenuated amplitude; a tabulated potential to its
 *  convolution with the half-density kernel. */
ExternalPotential restrict_potential(const ExternalPotential& V,
                                     const SolitaryWaveProfile& prof);

/** Integrate Qdot = E'(Pi), Pidot = -V_eff'(Q) with the classic 4th-order
 *  one-step scheme; E' comes from monotone cubic interpolation of the table and
 *  V enters through its restriction to the family (restrict_potential with the
 *  base-frequency profile). */
EffectiveTrajectory integrate_effective(const SolitonFamilyTable& table,
                                        const ExternalPotential& V, double Q0, double Pi0,
                                        double dt, double t_end);

struct AdiabaticConfig {
    double q0_hint = 0.0;            // initial tracker position
    double window_halfwidth = 14.0;  // tracker centroid window
    double continuity_gate = 3.0;    // max per-frame tracker jump
    std::size_t sample_stride = 1;   // analyze every k-th recorded frame
    double fit_window_radius = 15.0; // manifold-fit window
};

struct AdiabaticReport {
    std::vector<double> times, q, Q, P, Pi;
    double sup_q_err = 0.0, sup_P_err = 0.0;
    bool truncated = false; // tracking lost before the window end
    double loss_time = 0.0;
};

/** Track the PDE soliton, fit its manifold parameters, and compare the
 *  (position, momentum) pair against the effective trajectory. */
AdiabaticReport compare_adiabatic(const Trajectory& pde, const EffectiveTrajectory& eff,
                                  const SolitonFamilyTable& table,
                                  const AdiabaticConfig& cfg);

} // namespace slab
