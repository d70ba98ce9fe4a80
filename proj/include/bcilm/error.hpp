#pragma once

#include <stdexcept>
#include <string>

namespace bcilm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration values or combinations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; the message carries the file and line number.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Data that parsed but violates a model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Time or index outside the permitted window.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Feature requested that this build does not support.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// MCMC could not start from the supplied state.
class InitializationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bcilm
