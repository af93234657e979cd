#pragma once

#include <stdexcept>
#include <string>

namespace mbg {

/// Base of every domain error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidBoard : public Error {
public:
    using Error::Error;
};

class IllegalMove : public Error {
public:
    using Error::Error;
};

class Unsupported : public Error {
public:
    using Error::Error;
};

/// A family or search exceeded its configured size budget.
class CapacityError : public Error {
public:
    using Error::Error;
};

class UndefinedDensity : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class PreconditionFault : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

/// Raised when an internal invariant that a correct implementation can never
/// break is broken. Never caught by the library.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace mbg
