#pragma once

#include <stdexcept>
#include <string>

namespace pda {

/// Caller violated a precondition (bad shapes, empty inputs, invalid k).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A criterion or config does not fit the data it is applied to.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input files: unparsable numbers, NaN/inf, ragged rows.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pda
