#pragma once

#include <stdexcept>
#include <string>

namespace swarmsim {

/// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed config files, CSV rows, CLI arguments.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// The hardware-is-not-good-enough signal: no viable sensor region,
/// no cell reaches the target behavior. Mapped to exit code 3.
class CapabilityError : public Error {
public:
    explicit CapabilityError(const std::string& msg) : Error(msg) {}
};

/// Non-finite state or a broken invariant mid-trial.
class SimulationError : public Error {
public:
    explicit SimulationError(const std::string& msg) : Error(msg) {}
};

}  // namespace swarmsim
