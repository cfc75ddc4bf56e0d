#pragma once

#include <stdexcept>
#include <string>

namespace hallmhd {

/// Bad configuration: wrong grid pairing, unsupported parameter, malformed input.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// An operation was called on data violating its stated precondition.
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// Analysis input unusable (nonpositive samples, too few points, ...).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem / serialization failure.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hallmhd
