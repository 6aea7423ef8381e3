#pragma once

#include <stdexcept>
#include <string>

namespace rswp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (bad JSON, wrong types, unknown keys).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A well-formed value that breaks a model invariant. `field()` names the
/// offending entry so callers can point at it.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Caller broke a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Field magnitude exceeded the blow-up threshold.
class BlowUpError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

}  // namespace rswp
