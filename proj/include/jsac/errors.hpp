#pragma once

#include <stdexcept>
#include <string>

namespace jsac {

/// Base type for every contract violation raised by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched vector lengths or matrix dimensions.
struct DimensionError : Error {
  using Error::Error;
};

/// A precondition on the values themselves was violated (e.g. a matrix that
/// should be Hermitian is not, beyond tolerance).
struct ContractError : Error {
  using Error::Error;
};

/// Invalid problem configuration.
struct ConfigError : Error {
  using Error::Error;
};

/// The requested quantity is undefined for this instance (zero channels,
/// vanishing received signal, objective matrix identically zero, ...).
struct DegenerateError : Error {
  using Error::Error;
};

/// The solver could not meet its own accuracy contract.
struct SolverError : Error {
  using Error::Error;
};

/// An optimality or rank certificate failed.
struct CertificateError : Error {
  using Error::Error;
};

/// File system / serialization failure.
struct IoError : Error {
  using Error::Error;
};

}  // namespace jsac
