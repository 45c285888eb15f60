#pragma once

#include <stdexcept>
#include <string>

namespace qmm {

// Invalid input data: bad array geometry, bad ports, bad config values.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not deliver its contract.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raw gamma_beta evaluation requested too close to an eigenvalue pole;
// scatter() handles that region analytically.
struct PoleProximityError : NumericalError {
    using NumericalError::NumericalError;
};

struct PeakNotFoundError : NumericalError {
    using NumericalError::NumericalError;
};

struct TruncatedPeakError : NumericalError {
    using NumericalError::NumericalError;
};

} // namespace qmm
