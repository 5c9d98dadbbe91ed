#pragma once

#include <stdexcept>
#include <string>

namespace tvc {

// Bad configuration value or operator argument (non-positive mass, dt <= 0, ...).
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Non-finite value where a finite one is required.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Defuzzification denominator vanished: no rule fires at the queried point.
struct CoverageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// cos(phi) or cos(theta) too close to zero for the thrust force balance.
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structurally unusable input: empty trajectory, empty front, unevaluated individual.
struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Run-config file rejected; the message names the offending key or line.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace tvc
