#pragma once

#include <stdexcept>
#include <string>

namespace entroscope {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input data (non-increasing abscissas, bad strings, ...).
struct ValidationError : Error {
    using Error::Error;
};

// A value left its admissible range (ordinates outside [0,1], ...).
struct RangeError : Error {
    using Error::Error;
};

// A point or an interval is outside the domain of a map, or two maps
// that must share a domain do not.
struct DomainError : Error {
    using Error::Error;
};

// range(g) is not contained in domain(f) when forming f∘g.
struct CompositionError : Error {
    using Error::Error;
};

// A construction exceeded the configured breakpoint budget.
struct ResourceLimitError : Error {
    using Error::Error;
};

// Glued pieces disagree at a junction.
struct ContinuityError : Error {
    using Error::Error;
};

// A parameter violates its contract (t outside (0,1], steepness < 20, ...).
struct ParameterError : Error {
    using Error::Error;
};

// An interval degenerated to a point where a non-degenerate one is required.
struct DegenerateIntervalError : Error {
    using Error::Error;
};

// A matrix is not square.
struct ShapeError : Error {
    using Error::Error;
};

// A certified invariant failed; indicates a bug, not bad input.
struct InternalError : Error {
    using Error::Error;
};

}  // namespace entroscope
