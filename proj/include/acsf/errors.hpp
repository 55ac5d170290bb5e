#pragma once

#include <stdexcept>
#include <string>

namespace acsf {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the admissible domain (p = 0, node outside Omega, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A curve element has collapsed to zero length.
class DegenerateMeshError : public Error {
  public:
    using Error::Error;
};

/// The linear system has a (numerically) singular pivot block.
class SingularSystemError : public Error {
  public:
    using Error::Error;
};

/// Newton iteration failed to reach the residual tolerance.
class NonconvergenceError : public Error {
  public:
    NonconvergenceError(const std::string& what, double residual)
        : Error(what), last_residual(residual) {}
    double last_residual = 0.0;
};

/// Malformed experiment configuration or unknown preset.
class ConfigError : public Error {
  public:
    using Error::Error;
};

}  // namespace acsf
