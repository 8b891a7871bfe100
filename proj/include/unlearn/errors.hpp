#pragma once

#include <stdexcept>
#include <string>

namespace unlearn {

/// Shapes of operands do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An input contained NaN or an infinity.
class NonFiniteError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Cholesky hit a pivot <= 0.
class NotPositiveDefinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// LU elimination hit a pivot below tolerance.
class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Removing the requested rows leaves (I - H_SS) singular: some direction is
/// carried only by the deleted points (a leverage-one group).
class DegenerateDeletion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data (CSV parse failures, ragged rows, bad labels).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace unlearn
