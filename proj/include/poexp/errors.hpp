#pragma once

#include <stdexcept>
#include <string>

namespace poexp {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every weight supplied to a pmf constructor was zero.
class AllZero : public Error {
public:
    using Error::Error;
};

/// A pmf weight was negative.
class NegativeWeight : public Error {
public:
    using Error::Error;
};

/// A distribution or function parameter was out of range.
class BadParameter : public Error {
public:
    using Error::Error;
};

/// The zero-bias transform was requested for a pmf with zero mean.
class ZeroMean : public Error {
public:
    using Error::Error;
};

/// A tabulated grid is too short for the requested operation.
class GridTooShort : public Error {
public:
    using Error::Error;
};

/// Tabulated values exceed their declared growth envelope.
class EnvelopeViolated : public Error {
public:
    using Error::Error;
};

/// A series tail could not be certified below the requested tolerance.
class TailNotCertified : public Error {
public:
    using Error::Error;
};

/// A brute-force enumeration exceeded its combinatorial guards.
class TooLarge : public Error {
public:
    using Error::Error;
};

/// A problem configuration failed to parse or validate.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace poexp
