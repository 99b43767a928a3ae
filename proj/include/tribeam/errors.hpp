#pragma once

#include <stdexcept>
#include <string>

namespace tribeam {

/// Base class for all library errors. The CLI maps these to exit code 3;
/// parse and validation failures are reported as data, not exceptions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two values met that live on different mode bases.
class BasisMismatchError : public Error {
 public:
  using Error::Error;
};

/// An input that is structurally degenerate (e.g. a zero vector where a ray
/// direction is required).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation was violated by the caller.
class ContractViolationError : public Error {
 public:
  using Error::Error;
};

/// An experiment configuration that cannot be realized (missing leg,
/// degenerate geometry, too few screen points, ...).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// The state has no weight on any outcome of the requested model, so no
/// renormalized distribution exists.
class NoDetectionError : public Error {
 public:
  using Error::Error;
};

/// A sampling request with zero trials.
class EmptyTrialError : public Error {
 public:
  using Error::Error;
};

}  // namespace tribeam
