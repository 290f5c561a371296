#pragma once

#include <stdexcept>
#include <string>

namespace ucpd {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (non-finite
// observation, probability outside (0,1), gamma outside [0, 1/2], ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Series or vector too short for the requested operation.
class SizeError : public Error {
public:
    using Error::Error;
};

// Inconsistent experiment or test configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Request that is well-formed but has no calibrated answer (e.g. a p-value
// for a weight exponent without a known limit law).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

}  // namespace ucpd
