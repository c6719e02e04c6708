#pragma once

#include <stdexcept>
#include <string>

namespace qrm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument outside an operation's domain (non-finite input, point outside a box).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Bad or inconsistent user configuration. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure of a well-formed problem. The CLI maps this to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ResonantBoxError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularMatrixError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UnsupportedOperatorError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace qrm
