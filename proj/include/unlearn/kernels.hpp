#pragma once

// Data-parallel inner loops over the n training rows. Two implementations
// share each signature:
//
//   unlearn::kernels          OpenMP-parallel (falls back to serial when
//                             the build has no OpenMP)
//   unlearn::kernels::serial  plain loops, kept as the reference
//
// Every output entry is accumulated by exactly one thread, in ascending row
// order, so the two implementations agree bit for bit.
//
// `keep` is a per-row mask (nonzero = include the row). An empty mask keeps
// every row.

#include <cstdint>
#include <span>

#include "unlearn/numerics.hpp"

namespace unlearn::kernels {

using RowMask = std::span<const std::uint8_t>;

/// sum over kept rows of x_i x_i^T, plus ridge on the diagonal.
Matrix gram(const Matrix& x, RowMask keep, double ridge);
/// sum over kept rows of y_i x_i.
Vector xt_y(const Matrix& x, std::span<const double> y, RowMask keep);
/// X theta.
Vector rows_dot(const Matrix& x, std::span<const double> theta);
/// Row-wise L^{-1} x_i: the factored hat matrix, H = Z Z^T.
Matrix whiten_rows(const Matrix& x, const Cholesky& factor);
/// Z Z^T.
Matrix outer_rows(const Matrix& z);
/// X G.
Matrix project_rows(const Matrix& x, const Matrix& g);

/// Threads an OpenMP parallel region would use; 1 without OpenMP.
int max_threads() noexcept;

namespace serial {
Matrix gram(const Matrix& x, RowMask keep, double ridge);
Vector xt_y(const Matrix& x, std::span<const double> y, RowMask keep);
Vector rows_dot(const Matrix& x, std::span<const double> theta);
Matrix whiten_rows(const Matrix& x, const Cholesky& factor);
Matrix outer_rows(const Matrix& z);
Matrix project_rows(const Matrix& x, const Matrix& g);
}  // namespace serial

}  // namespace unlearn::kernels
