#pragma once

#include <stdexcept>
#include <string>

namespace fragile {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (graph, witness or distribution files).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The input does not belong to the graph class the caller asserted.
class ClassViolation : public Error {
 public:
  using Error::Error;
};

/// A certificate failed independent re-checking.
class VerificationError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive search exceeded its configured limit.
class SearchLimitError : public Error {
 public:
  using Error::Error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

}  // namespace fragile
