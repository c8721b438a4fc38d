#pragma once

#include "slab/config.hpp"
#include "slab/grid.hpp"
#include "slab/model.hpp"

#include <string>

namespace slab::cli {

Grid1D grid_from_params(const KeyValueMap& p);
ModelSpec model_from_params(const KeyValueMap& p);
FieldState initial_from_params(const KeyValueMap& p, const Grid1D& grid, const ModelSpec& model);

/** Execute one experiment described by a full parameter map and write every
 *  artifact (manifest.txt, observables.csv, dumps, heatmap, per-preset
 *  reports) into out_dir. Throws ConfigError / NumericalAbort. */
void run_experiment(KeyValueMap params, const std::string& out_dir);

} // namespace slab::cli
