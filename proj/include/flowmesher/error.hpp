#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flowmesher {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnsupportedFaceError : public Error {
 public:
  using Error::Error;
};

/// Raised when a solid boundary is not a closed 2-manifold.
class TopologyError : public Error {
 public:
  using Error::Error;
};

class DegenerateNormalError : public Error {
 public:
  using Error::Error;
};

/// No boundary vertex was found around a query point. In a running
/// simulation this means the speed cap or the boundary augmentation failed.
class SearchRadiusError : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class FilterError : public Error {
 public:
  using Error::Error;
};

class OverlapError : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class UnremovableTetError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace flowmesher
