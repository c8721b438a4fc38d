#pragma once

#include "slab/grid.hpp"

#include <cstdint>

namespace slab {

enum class RandomFieldKind {
    Bumps,    // smooth localized data around the zero vacuum
    KinkTrain // field connecting the +-1 vacua with a seeded number of sign changes
};

/** Deterministic C^2-smooth random initial data: a sum of ~10 Gaussian bumps
 *  with seeded centers/widths/signs, cut off smoothly to `support` (quintic
 *  ramps of length 3*smoothness at each side). psi is rescaled so
 *  max|psi| <= amplitude; pi gets an independent bump sum at 0.5*amplitude.
 *  KinkTrain multiplies the +-1 kink-train backbone in on top of the bumps.
 *  The draw order is fixed, so a seed pins the field bit-exactly on every
 *  platform. */
FieldState random_initial(std::uint64_t seed, const Grid1D& grid, double support_lo,
                          double support_hi, double amplitude, double smoothness,
                          RandomFieldKind kind, FieldKind field_kind = FieldKind::Real);

} // namespace slab
