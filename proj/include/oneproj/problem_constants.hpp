#pragma once

#include <cstdint>

#include "oneproj/errors.hpp"

namespace oneproj {

// Problem-level constants the configurations are derived from: gradient
// bound G, domain diameter D, smoothness L, the SOGD offset delta, and the
// horizon T.
struct ProblemConstants {
    double g_bound = 0.0;
    double d_bound = 0.0;
    double smoothness = 0.0;
    double delta = 1.0;
    std::int64_t horizon = 0;

    void validate() const {
        if (!(g_bound > 0.0) || !(d_bound > 0.0) || !(smoothness > 0.0) ||
            !(delta > 0.0) || horizon < 1)
            throw ConfigError("problem constants: G, D, L, delta must be positive and T >= 1");
    }
};

} // namespace oneproj
