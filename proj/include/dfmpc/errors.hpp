#pragma once

#include <stdexcept>
#include <string>

namespace dfmpc {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A named record field is absent.
class MissingFieldError : public Error {
 public:
  explicit MissingFieldError(const std::string& field)
      : Error("missing field " + field), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// A field or argument has the wrong kind or shape (scalar vs vector vs matrix,
/// wrong length, index out of range).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Integration produced a non-finite state. Callers that feed the solver catch
/// this and rank the candidate as non-finite instead of failing.
class NonFiniteStateError : public Error {
 public:
  using Error::Error;
};

/// A problem definition failed validation; the message lists every violation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace dfmpc
