#pragma once

#include <stdexcept>
#include <string>

namespace hessprod {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: grids, configuration files, domain catalog parameters.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what, std::string key = {})
        : Error(what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class InvalidGrid : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// A point lies outside the domain where a formula is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Base class for failures of a numerical procedure (exit code 3 at the CLI).
class NumericalError : public Error {
public:
    using Error::Error;
};

class SamplingError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class QuadratureFailure : public NumericalError {
public:
    QuadratureFailure(const std::string& what, double last, double previous)
        : NumericalError(what), last_(last), previous_(previous) {}
    double last_estimate() const noexcept { return last_; }
    double previous_estimate() const noexcept { return previous_; }

private:
    double last_;
    double previous_;
};

class BracketError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class BlowUp : public NumericalError {
public:
    BlowUp(const std::string& what, std::size_t last_good)
        : NumericalError(what), last_good_(last_good) {}
    std::size_t last_good_node() const noexcept { return last_good_; }

private:
    std::size_t last_good_;
};

/// Solver iterate left the discrete coordinate-convex cone.
class PositivityError : public NumericalError {
public:
    PositivityError(const std::string& what, std::size_t node)
        : NumericalError(what), node_(node) {}
    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

class StateError : public Error {
public:
    using Error::Error;
};

} // namespace hessprod
