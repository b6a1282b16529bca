#pragma once

#include <stdexcept>
#include <string>

namespace utilagg {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text or file content.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A value violates a type invariant or an operation's precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A brute-force scan would exceed its configured size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A named hypothesis of a theorem does not hold on the instance, so the
/// constructive step that depends on it cannot run.
class HypothesisError : public Error {
 public:
  HypothesisError(std::string hypothesis, const std::string& detail)
      : Error(hypothesis + ": " + detail), hypothesis_(std::move(hypothesis)) {}
  const std::string& hypothesis() const noexcept { return hypothesis_; }

 private:
  std::string hypothesis_;
};

}  // namespace utilagg
