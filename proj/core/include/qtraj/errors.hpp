#ifndef QTRAJ_ERRORS_HPP
#define QTRAJ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qtraj {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Model or state parameters violate an invariant (m <= 0, non-unitary basis, ...).
struct ValidationError : Error {
    using Error::Error;
};

/// Phase-derivative quantity requested where the density is below the node threshold.
struct NodeError : Error {
    using Error::Error;
};

/// Density tabulation for inverse-CDF sampling failed to normalize.
struct GridError : Error {
    using Error::Error;
};

/// Pointer coefficients underflowed to zero after weak coupling.
struct DegenerateError : Error {
    using Error::Error;
};

/// Count-based extraction invoked with zero total counts.
struct EmptyCountsError : Error {
    using Error::Error;
};

/// Extraction argument left the invertible domain (|asym| = 1 for atanh).
struct DomainError : Error {
    using Error::Error;
};

/// Post-selected state is (numerically) orthogonal to the pre-selected state.
struct OrthogonalPostselectionError : Error {
    using Error::Error;
};

/// Both bracketing scan cells are missing; the momentum field has a nodal gap here.
struct GapError : Error {
    using Error::Error;
};

/// Requested position lies outside the tabulated grid span.
struct OutOfRangeError : Error {
    using Error::Error;
};

/// Trajectory sets passed to a comparison do not pair up.
struct MismatchError : Error {
    using Error::Error;
};

/// Config text could not be parsed; carries the 1-based line number.
struct ParseError : Error {
    ParseError(const std::string& msg, int line_no)
        : Error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    int line;
};

/// Config key not in the documented key list.
struct UnknownKeyError : Error {
    using Error::Error;
};

/// Mutually exclusive config keys were both given.
struct ConflictError : Error {
    using Error::Error;
};

/// A pipeline stage failed; recorded in the manifest.
struct StageError : Error {
    using Error::Error;
};

}  // namespace qtraj

#endif
