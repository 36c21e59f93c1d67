#pragma once

#include <stdexcept>
#include <string>

namespace minlen {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a deformation map or kernel.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Inconsistent or unsupported configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// The spectral parameter sits on or below the pole of the integrand.
class PoleError : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// |p0| exceeds b1 + b2, no relative momentum is admissible.
class EmptySupport : public Error {
public:
  using Error::Error;
};

/// Coulomb level with n + delta = 0.
class InvalidLevel : public Error {
public:
  using Error::Error;
};

/// A wavefunction was requested for a state that did not pass the root residual check.
class UnsolvedState : public Error {
public:
  using Error::Error;
};

} // namespace minlen
