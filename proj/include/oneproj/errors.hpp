#pragma once

#include <stdexcept>
#include <string>

namespace oneproj {

// Caller passed something malformed: wrong dimension, non-finite input,
// out-of-range index, empty expert set.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A documented contract between components was broken at runtime, e.g. an
// inner algorithm returned a point outside the surrogate ball, or feedback
// losses exceeded the bound implied by the configured G and D.
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

// Invalid benchmark / algorithm configuration (bad field, missing value).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace oneproj
