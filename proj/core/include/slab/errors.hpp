#pragma once

#include <stdexcept>
#include <string>

namespace slab {

/** Bad configuration / arguments; the CLI maps this to exit code 2. */
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/** Numerical breakdown (NaN/overflow, rejected fits); CLI exit code 3. */
struct NumericalAbort : std::runtime_error {
    long step = -1;
    int node = -1;
    double time = 0.0;
    explicit NumericalAbort(const std::string& what) : std::runtime_error(what) {}
    NumericalAbort(const std::string& what, long step_, int node_, double time_)
        : std::runtime_error(what), step(step_), node(node_), time(time_) {}
};

} // namespace slab
