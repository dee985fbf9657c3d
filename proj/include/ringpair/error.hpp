#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ringpair {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters, malformed configuration, mismatched grids.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A numerical guard tripped (spectral truncation, non-finite data).
class NumericalGuardError : public Error {
public:
    using Error::Error;
};

/// No point satisfies the requested rate constraint.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Collects non-fatal warnings from operations that may degrade silently.
struct Diagnostics {
    std::vector<std::string> warnings;

    void warn(std::string message) { warnings.push_back(std::move(message)); }
    bool empty() const { return warnings.empty(); }
};

} // namespace ringpair
