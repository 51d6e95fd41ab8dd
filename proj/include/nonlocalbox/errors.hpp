#pragma once

#include <stdexcept>
#include <string>

namespace nlb {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A joint probability fell outside its positivity window.
struct PositivityViolation : Error {
    using Error::Error;
};

// A setting row does not sum to one within tolerance.
struct NormalizationViolation : Error {
    using Error::Error;
};

// Marginals of one party depend on the other party's setting.
struct NoSignalingViolation : Error {
    using Error::Error;
};

// A local observable is (numerically) deterministic, so the
// marginal-corrected correlation coefficient is undefined.
struct DeterministicMarginal : Error {
    using Error::Error;
};

// |D_xy| exceeds 1 by more than rounding noise; the box is inconsistent.
struct InvalidD : Error {
    using Error::Error;
};

// Common marginal p is exactly 0 or 1.
struct DegenerateBias : Error {
    using Error::Error;
};

// No box meets the requested CHSH value under the given criterion.
struct InfeasibleTarget : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

} // namespace nlb
