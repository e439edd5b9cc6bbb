#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vjface {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or lengths that do not agree (vectors, matrices, grids).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A rectangle or window that leaves its host image.
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// Training data that cannot support the requested fit (e.g. one class only).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class ImageTooSmallError : public Error {
 public:
  using Error::Error;
};

class InsufficientIdentitiesError : public Error {
 public:
  using Error::Error;
};

class UnknownLabelError : public Error {
 public:
  using Error::Error;
};

class EmptySplitError : public Error {
 public:
  using Error::Error;
};

/// Malformed text or binary input. Carries the 1-based line number when known
/// (0 for binary formats).
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class VersionMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace vjface
