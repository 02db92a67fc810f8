#pragma once

#include <stdexcept>
#include <string>

namespace opvol {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: bad dimensions, out-of-range levels, malformed scenarios.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A self-adjoint operator had an eigenvalue below the PSD tolerance.
class NotPositiveSemidefinite : public Error {
 public:
  NotPositiveSemidefinite(double eigenvalue, double tolerance);
  NotPositiveSemidefinite(double eigenvalue, double tolerance, const std::string& message);
  double eigenvalue() const noexcept { return eigenvalue_; }
  double tolerance() const noexcept { return tolerance_; }

 private:
  double eigenvalue_;
  double tolerance_;
};

/// The generator's underlying operator C is not normal.
class NotNormal : public Error {
 public:
  explicit NotNormal(double defect);
  NotNormal(double defect, const std::string& message);
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

/// Moment inputs violate Jensen's inequality (|E J|^2 > E|J|^2).
class InvalidMoments : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A coupling or bookkeeping invariant was broken inside the library.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Rethrows the in-flight exception with `context` prefixed to its message,
/// keeping its type when it is one of the errors above.
[[noreturn]] void rethrow_with_context(const std::string& context);

}  // namespace opvol
