#pragma once

#include <stdexcept>
#include <string>

namespace pf2es {

/// Base class for every error raised by the library. The C API maps each
/// subclass onto a distinct status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on arguments was violated (length mismatch, out of range).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Lookup of an unregistered benchmark problem.
class RegistryError : public Error {
 public:
  using Error::Error;
};

/// Requested output dimensionality is not supported (e.g. hypervolume for M > 3).
class UnsupportedDimensionError : public Error {
 public:
  using Error::Error;
};

/// Factorization failure after jitter escalation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing a file failed.
class IOError : public Error {
 public:
  using Error::Error;
};

/// Surrogate fitting failed for a particular output.
class FitError : public Error {
 public:
  FitError(int output_index, const std::string& what)
      : Error("output " + std::to_string(output_index) + ": " + what), output_index_(output_index) {}

  int output_index() const noexcept { return output_index_; }

 private:
  int output_index_;
};

}  // namespace pf2es
