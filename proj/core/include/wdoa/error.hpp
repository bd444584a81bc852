#pragma once

#include <stdexcept>
#include <string>

namespace wdoa {

/// Precondition violation on a public entry point.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a steering matrix (or any factored matrix) loses column rank,
/// typically because two DOA parameters coincide.
class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(int column)
      : std::runtime_error("matrix is rank deficient at column " + std::to_string(column)),
        column_(column) {}

  int column() const noexcept { return column_; }

 private:
  int column_;
};

}  // namespace wdoa
