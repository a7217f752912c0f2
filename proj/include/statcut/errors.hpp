#ifndef STATCUT_ERRORS_HPP
#define STATCUT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace statcut {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or labeling length does not match the energy it is used with.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A pairwise weight is negative, so the energy cannot be minimised by a cut.
class SubmodularityError : public Error {
 public:
  using Error::Error;
};

/// A multiplier lies outside the search box of its constraint.
class SearchBoxError : public Error {
 public:
  using Error::Error;
};

/// Malformed input that is not a dimension problem (bad bounds, duplicate edges...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// File could not be read, written or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration requested above the configured variable cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace statcut

#endif  // STATCUT_ERRORS_HPP
