#pragma once

#include "slab/errors.hpp"
#include "slab/grid.hpp"
#include "slab/model.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace slab {

struct Boundary {
    enum class Kind { DirichletVacuum, Periodic, Sponge };

    Kind kind = Kind::DirichletVacuum;
    double left_value = 0.0;   // DirichletVacuum
    double right_value = 0.0;
    double width = 0.0;        // Sponge zone length at each end
    double strength = 5.0;     // Sponge damping rate

    static Boundary dirichlet_vacuum(double left, double right) {
        Boundary b;
        b.kind = Kind::DirichletVacuum;
        b.left_value = left;
        b.right_value = right;
        return b;
    }
    static Boundary periodic() {
        Boundary b;
        b.kind = Kind::Periodic;
        return b;
    }
    static Boundary sponge(double width, double strength = 5.0) {
        Boundary b;
        b.kind = Kind::Sponge;
        b.width = width;
        b.strength = strength;
        return b;
    }
};

struct IntegratorConfig {
    double dt = 0.0;
    Boundary boundary;
    int record_every = 1;

    void validate(const Grid1D& grid) const;
};

struct Probe {
    std::string name;
    std::function<double(const FieldState&)> fn;
};

struct Trajectory {
    std::vector<double> times;                       // at every recorded frame
    std::vector<FieldState> snapshots;               // stride = record_every
    std::map<std::string, std::vector<double>> observables;

    const std::vector<double>& series(const std::string& name) const {
        auto it = observables.find(name);
        if (it == observables.end()) throw std::out_of_range("no observable series: " + name);
        return it->second;
    }
    size_t frames() const { return times.size(); }
};

/** Additional per-node force added to the PDE right-hand side (used by the
 *  delta-coupled string models); accumulates into the force array in place. */
using ExtraForce = std::function<void(const FieldState&, std::vector<double>&)>;

/** One Stoermer-Verlet (kick-drift-kick) step.
 *  pi_half = pi + dt/2 force(psi); psi += dt pi_half; pi = pi_half + dt/2 force(psi).
 *  Boundary rows are overwritten per cfg; the sponge multiplies pi by
 *  exp(-strength sigma(x) dt) per full step (split across the two kicks). */
FieldState step(FieldState state, const ModelSpec& model, const IntegratorConfig& cfg);

/** Repeated stepping with recorded snapshots and observable series.
 *  Always records energy, momentum (and charge for complex fields) plus the
 *  given probes, every record_every steps, including the initial and final
 *  frames. Deterministic: identical inputs give bit-identical trajectories. */
Trajectory run(FieldState state, const ModelSpec& model, const IntegratorConfig& cfg,
               double t_end, const std::vector<Probe>& probes = {},
               const ExtraForce& extra = nullptr, bool keep_snapshots = true);

} // namespace slab
