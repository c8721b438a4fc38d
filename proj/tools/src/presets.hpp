#pragma once

#include "slab/config.hpp"

#include <string>
#include <vector>

namespace slab::cli {

/** Names of the built-in experiments, in help order. */
std::vector<std::string> preset_names();

/** Full default parameter map for one preset. Every key that run_experiment
 *  understands appears here, so override validation is just key-set membership. */
KeyValueMap preset_defaults(const std::string& name);

/** One-line description for --help. */
std::string preset_blurb(const std::string& name);

} // namespace slab::cli
