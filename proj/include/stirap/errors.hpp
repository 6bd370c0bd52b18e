#pragma once

#include <stdexcept>
#include <string>

namespace stirap {

// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user input: malformed configs, unresolved pulse ids, bad parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Pulse pair requested with a non-positive delay.
class OrderingError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// NaN/Inf reaching the numerics.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Adaptive step size collapsed; `time()` is where it happened.
class StiffnessError : public NumericError {
 public:
  StiffnessError(const std::string& what, double t) : NumericError(what), t_(t) {}
  double time() const noexcept { return t_; }

 private:
  double t_;
};

// Analysis requested on a system it is not defined for.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace stirap
