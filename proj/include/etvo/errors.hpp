#pragma once

#include <stdexcept>
#include <string>

namespace etvo {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration (bad flag value, violated parameter invariant).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input data (trace files, reports).
class DataError : public Error {
public:
    using Error::Error;
};

/// Violated numeric contract (length mismatch, corrupt DP state, out-of-range index).
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace etvo
