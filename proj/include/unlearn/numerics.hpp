#pragma once

// Small self-contained dense linear algebra: row-major matrices, modified
// Gram-Schmidt with rank detection, cyclic Jacobi eigensolver, Cholesky and
// partially pivoted LU.

#include <cstddef>
#include <span>
#include <vector>

namespace unlearn {

using Vector = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  static Matrix identity(std::size_t n);
  /// Builds a matrix whose rows are the given vectors (all the same length).
  static Matrix from_rows(std::span<const Vector> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  Vector row_copy(std::size_t i) const;
  Vector col_copy(std::size_t j) const;

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  Matrix transpose() const;
  bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Basic vector/matrix arithmetic.
double dot(std::span<const double> a, std::span<const double> b) noexcept;
double norm2(std::span<const double> a) noexcept;
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;
Vector subtract(std::span<const double> a, std::span<const double> b);
Vector add(std::span<const double> a, std::span<const double> b);
Vector scaled(std::span<const double> a, double s);
bool all_finite(std::span<const double> a) noexcept;

Vector matvec(const Matrix& a, std::span<const double> x);
/// a^T x
Vector matvec_transposed(const Matrix& a, std::span<const double> x);
Matrix matmul(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& a) noexcept;
double max_abs(const Matrix& a) noexcept;
/// Median of the values (mean of the middle pair for even counts); NaN when empty.
double median(std::vector<double> values);

struct GramSchmidt {
  /// k x rank; row i holds the coordinates of input i in the basis. Entries
  /// past an input's own basis vector are exactly zero.
  Matrix coeffs;
  std::vector<Vector> basis;
  std::size_t rank = 0;
  /// For each input, the index of the basis vector it introduced, or -1 when
  /// the input was linearly dependent on earlier ones.
  std::vector<long> pivot;
};

constexpr double kDefaultRankTol = 1e-10;

/// Modified Gram-Schmidt with one re-orthogonalization pass. An input whose
/// residual norm is <= tol * ||x_i|| is treated as dependent and contributes
/// no basis vector.
GramSchmidt mgs(std::span<const Vector> vectors, double tol = kDefaultRankTol);

struct EigenPairs {
  Vector values;               ///< descending
  std::vector<Vector> vectors;  ///< unit, pairwise orthonormal
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
EigenPairs sym_eig(const Matrix& a);

/// Cholesky factor A = L L^T of a symmetric positive-definite matrix.
class Cholesky {
 public:
  explicit Cholesky(const Matrix& a);

  std::size_t size() const noexcept { return lower_.rows(); }
  const Matrix& lower() const noexcept { return lower_; }

  Vector solve(std::span<const double> b) const;
  /// L^{-1} b
  Vector solve_lower(std::span<const double> b) const;
  /// In-place L^{-1} applied to one row vector; leading zeros are skipped.
  void solve_lower_in_place(std::span<double> b) const noexcept;

 private:
  Matrix lower_;
};

Vector spd_solve(const Matrix& a, std::span<const double> b);

constexpr double kPivotTol = 1e-12;

/// Gaussian elimination with partial pivoting for small square systems.
/// Throws SingularMatrix when a pivot falls below kPivotTol * max|A|.
Vector lin_solve(const Matrix& a, std::span<const double> b);

}  // namespace unlearn
