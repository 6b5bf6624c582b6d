#pragma once

#include <stdexcept>
#include <string>

namespace fintime {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad dimensions, non-finite values, out-of-range flags.
struct ValidationError : Error {
    using Error::Error;
};

/// Structurally infeasible design: non-Hurwitz gains, undefined exponent
/// ladder, complex roots where a real margin is required.
struct DesignError : Error {
    using Error::Error;
};

/// A linear solve or iteration lost too much accuracy to certify anything.
struct NumericalError : Error {
    using Error::Error;
};

/// Trajectory left the representable range during integration.
struct BlowUpError : Error {
    BlowUpError(const std::string& what, double t_first_bad)
        : Error(what), t_first_bad(t_first_bad) {}
    double t_first_bad;
};

}  // namespace fintime
