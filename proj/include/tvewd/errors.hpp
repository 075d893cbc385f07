#pragma once

#include <stdexcept>

namespace tvewd {

/// Input data violates a format or data-quality requirement.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A local or global least-squares system was rank deficient or too
/// ill-conditioned to solve.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid, inconsistent or unknown configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace tvewd
