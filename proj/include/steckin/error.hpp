#pragma once

#include <stdexcept>
#include <string>

namespace steckin {

/// Raised when an argument lies outside the domain of an operation.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exponent hits a pole of the formula (e.g. p = 1/2 in h36).
class SingularParameterError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// A root search found no sign change inside its bracket.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A ratio was requested for the zero vector.
class UndefinedRatioError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {
inline void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}
}  // namespace detail

}  // namespace steckin
