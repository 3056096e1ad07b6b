#pragma once

#include <stdexcept>
#include <string>

namespace tlselect {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violated a documented precondition or range.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A metric has no defined value for the given counts (e.g. sensitivity with no positives).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

/// A file or document could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace detail
}  // namespace tlselect
