#pragma once

#include <stdexcept>
#include <string>

namespace suav {

// Base type for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid value handed to a math/physics operation (non-finite input,
// out-of-range mode flag, ...).
struct DomainError : Error {
    using Error::Error;
};

// Euler-rate transform requested inside the gimbal-lock guard band.
struct SingularityError : DomainError {
    using DomainError::DomainError;
};

// Inconsistent configuration (mismatched list lengths, bad scenario values).
struct ConfigError : Error {
    using Error::Error;
};

// Scenario-file syntax or schema violation, with source location.
struct ParseError : ConfigError {
    ParseError(const std::string &what, int line_arg, int column_arg)
        : ConfigError(what), line(line_arg), column(column_arg) {}
    int line = 0;
    int column = 0;
};

// State left the configured physical envelope during integration.
struct DivergenceError : Error {
    DivergenceError(const std::string &what, long step_index_arg)
        : Error(what), step_index(step_index_arg) {}
    long step_index = 0;
};

// Iterative solver failed to converge; carries the final residual.
struct NumericError : Error {
    NumericError(const std::string &what, double residual_arg)
        : Error(what), residual(residual_arg) {}
    double residual = 0.0;
};

} // namespace suav
