#pragma once

#include <stdexcept>
#include <string>

namespace shm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes, dimensions, versions or option values that do not fit together.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input data (bad labels, missing columns, all-missing features).
class DataError : public Error {
public:
    using Error::Error;
};

/// An API called in the wrong order or with an unusable argument.
class UsageError : public Error {
public:
    using Error::Error;
};

/// File system failures.
class IoError : public Error {
public:
    using Error::Error;
};

/// Numerical divergence during time integration.
class SimulationError : public Error {
public:
    SimulationError(const std::string& what, double time_s)
        : Error(what), time_s_(time_s) {}

    double time_s() const noexcept { return time_s_; }

private:
    double time_s_;
};

}  // namespace shm
