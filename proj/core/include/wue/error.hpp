#pragma once

#include <stdexcept>
#include <string>

namespace wue {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point lies outside the chart, too close to a coordinate singularity,
/// or a tangent vector exceeds the injectivity bound.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A derivative or symbol order beyond what the implementation supports.
class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

/// A numerical estimate failed to reach the requested tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double estimate)
      : Error(what + " (error estimate " + std::to_string(estimate) + ")"), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

/// The operator is not in the image of the requested quantization.
class InversionError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace wue
