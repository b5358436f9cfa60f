#pragma once

#include <stdexcept>
#include <string>

namespace nlsctl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A field contains NaN or infinite values.
class InvalidFieldError : public Error {
 public:
  using Error::Error;
};

/// Two objects live on incompatible grids or time nodes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Parameters violate a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Time discretization is unusable (for example zero steps).
class InvalidDiscretizationError : public Error {
 public:
  using Error::Error;
};

/// The requested mode is deliberately not supported for these inputs.
class UnsupportedModeError : public Error {
 public:
  using Error::Error;
};

/// A path with no increments has no p-variation.
class UndefinedPathError : public Error {
 public:
  using Error::Error;
};

/// The forward solution left the representable range.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double last_valid_time)
      : Error(what), last_valid_time_(last_valid_time) {}

  double last_valid_time() const noexcept { return last_valid_time_; }

 private:
  double last_valid_time_;
};

}  // namespace nlsctl
