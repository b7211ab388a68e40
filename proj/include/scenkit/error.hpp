#pragma once

#include <stdexcept>
#include <string>

namespace scenkit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input-side failures. The CLI maps these to exit code 2.
class IoError : public Error {
 public:
  using Error::Error;
};
class SchemaError : public Error {
 public:
  using Error::Error;
};
class ValidationError : public Error {
 public:
  using Error::Error;
};
class ConfigError : public Error {
 public:
  using Error::Error;
};
class SpecError : public Error {
 public:
  using Error::Error;
};

// Contract violations and runtime failures (exit code 1).
class ArgumentError : public Error {
 public:
  using Error::Error;
};
class LookupError : public Error {
 public:
  using Error::Error;
};
class ClassificationError : public Error {
 public:
  using Error::Error;
};
class TooShortError : public Error {
 public:
  using Error::Error;
};

}  // namespace scenkit
