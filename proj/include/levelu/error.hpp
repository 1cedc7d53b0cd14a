#pragma once

#include <stdexcept>
#include <string>

namespace levelu {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed Matrix Market / permutation / vector input.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Operand sizes do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Structural problem with a pattern: missing diagonal, empty column,
/// broken CSC invariants.
class StructureError : public Error {
public:
    using Error::Error;
};

/// A symbolic/numeric mismatch that can only come from a bug or from
/// values that were not built on the pattern they are used with.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace levelu
