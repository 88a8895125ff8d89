#pragma once

#include <stdexcept>
#include <string>

namespace papdyn {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text, config document or model structure.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A signal was evaluated below the floor of one of its one-sided terms.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A bound was requested on a domain where the signal is unbounded.
class UnboundedError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown: divergence, non-finite values, failed quadrature,
/// degenerate measures, missing certificates.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A caller violated an operation precondition (step larger than a delay,
/// lookup outside the stored range, mismatched grids).
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace papdyn
