#pragma once

#include <stdexcept>
#include <string>

namespace bpir {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NonPrimeModulus : Error {
    explicit NonPrimeModulus(const std::string& what) : Error(what) {}
};

struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& what) : Error(what) {}
};

struct SingularMatrix : Error {
    explicit SingularMatrix(const std::string& what) : Error(what) {}
};

struct InvalidDimensions : Error {
    explicit InvalidDimensions(const std::string& what) : Error(what) {}
};

struct LengthMismatch : Error {
    explicit LengthMismatch(const std::string& what) : Error(what) {}
};

struct OverPunctured : Error {
    explicit OverPunctured(const std::string& what) : Error(what) {}
};

struct TooFewCoordinates : Error {
    explicit TooFewCoordinates(const std::string& what) : Error(what) {}
};

struct DecodingFailure : Error {
    explicit DecodingFailure(const std::string& what) : Error(what) {}
};

struct FieldTooSmall : Error {
    explicit FieldTooSmall(const std::string& what) : Error(what) {}
};

struct InvalidParams : Error {
    explicit InvalidParams(const std::string& what) : Error(what) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

struct EmptyErrorSet : Error {
    explicit EmptyErrorSet(const std::string& what) : Error(what) {}
};

/// Raised when the session state machine observes something that its own
/// contracts rule out (e.g. an identification round that catches nobody).
struct InternalInconsistency : Error {
    explicit InternalInconsistency(const std::string& what) : Error(what) {}
};

} // namespace bpir
