#pragma once

#include <stdexcept>
#include <string>

namespace kbavg {

// Runtime failures of the numerics (blow-up, stalled averaging, ...).
// The CLI maps these to exit code 3; bad input maps to exit code 2.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A trajectory left the safety ball or produced non-finite values.
class BlowUpError : public NumericError {
public:
    BlowUpError(double time, double radius)
        : NumericError("solution blew up at t=" + std::to_string(time) +
                       " (|v|=" + std::to_string(radius) + ")"),
          time(time), radius(radius) {}
    double time;
    double radius;
};

// The T-doubling ladder ran past its ceiling without stabilizing,
// usually a resonance structure issue or a tolerance set too tight.
class NonConvergenceError : public NumericError {
public:
    using NumericError::NumericError;
};

// Quadrature step too coarse for the fastest oscillation present.
class QuadratureError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed config / input files. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace kbavg
