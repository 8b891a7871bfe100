#include <algorithm>

#include "unlearn/errors.hpp"
#include "unlearn/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace unlearn::kernels {

namespace {
// Rows of X touched per pass over the Gram accumulator; 64 rows of a few
// hundred doubles stay resident in L2.
constexpr std::size_t kRowBlock = 64;

void check_mask(const Matrix& x, RowMask keep) {
  if (!keep.empty() && keep.size() != x.rows()) throw DimensionError("row mask length mismatch");
}

using Index = long long;
}  // namespace

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

Matrix gram(const Matrix& x, RowMask keep, double ridge) {
  check_mask(x, keep);
  const std::size_t n = x.rows();
  const Index d = static_cast<Index>(x.cols());
  Matrix g(x.cols(), x.cols());
  const std::uint8_t* mask = keep.empty() ? nullptr : keep.data();

#pragma omp parallel
  {
    for (std::size_t i0 = 0; i0 < n; i0 += kRowBlock) {
      const std::size_t i1 = std::min(n, i0 + kRowBlock);
#pragma omp for schedule(dynamic, 8)
      for (Index a = 0; a < d; ++a) {
        double* ga = g.row(static_cast<std::size_t>(a)).data();
        for (std::size_t i = i0; i < i1; ++i) {
          if (mask && !mask[i]) continue;
          const double* xi = x.row(i).data();
          const double xa = xi[a];
          if (xa == 0.0) continue;
          for (Index b = a; b < d; ++b) ga[b] += xa * xi[b];
        }
      }
    }
  }
  for (Index a = 0; a < d; ++a) {
    g(a, a) += ridge;
    for (Index b = a + 1; b < d; ++b) g(b, a) = g(a, b);
  }
  return g;
}

Vector xt_y(const Matrix& x, std::span<const double> y, RowMask keep) {
  check_mask(x, keep);
  if (y.size() != x.rows()) throw DimensionError("xt_y: label length mismatch");
  const std::size_t n = x.rows();
  const Index d = static_cast<Index>(x.cols());
  Vector out(x.cols(), 0.0);
  const std::uint8_t* mask = keep.empty() ? nullptr : keep.data();
  constexpr Index kColChunk = 64;

#pragma omp parallel for schedule(static)
  for (Index c0 = 0; c0 < d; c0 += kColChunk) {
    const Index c1 = std::min(d, c0 + kColChunk);
    for (std::size_t i = 0; i < n; ++i) {
      if (mask && !mask[i]) continue;
      const double* xi = x.row(i).data();
      const double yi = y[i];
      for (Index c = c0; c < c1; ++c) out[c] += yi * xi[c];
    }
  }
  return out;
}

Vector rows_dot(const Matrix& x, std::span<const double> theta) {
  if (theta.size() != x.cols()) throw DimensionError("rows_dot: dimension mismatch");
  const Index n = static_cast<Index>(x.rows());
  Vector out(x.rows());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) out[i] = dot(x.row(i), theta);
  return out;
}

Matrix whiten_rows(const Matrix& x, const Cholesky& factor) {
  if (factor.size() != x.cols()) throw DimensionError("whiten_rows: dimension mismatch");
  Matrix z = x;
  const Index n = static_cast<Index>(z.rows());
#pragma omp parallel for schedule(dynamic, 16)
  for (Index i = 0; i < n; ++i) factor.solve_lower_in_place(z.row(i));
  return z;
}

Matrix outer_rows(const Matrix& z) {
  const Index n = static_cast<Index>(z.rows());
  Matrix h(z.rows(), z.rows());
#pragma omp parallel for schedule(dynamic, 8)
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) h(i, j) = dot(z.row(i), z.row(j));
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) h(j, i) = h(i, j);
  return h;
}

Matrix project_rows(const Matrix& x, const Matrix& g) {
  if (x.cols() != g.rows()) throw DimensionError("project_rows: dimension mismatch");
  Matrix out(x.rows(), g.cols());
  const Index n = static_cast<Index>(x.rows());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    auto xi = x.row(i);
    auto oi = out.row(i);
    for (std::size_t m = 0; m < x.cols(); ++m) {
      if (xi[m] == 0.0) continue;
      axpy(xi[m], g.row(m), oi);
    }
  }
  return out;
}

}  // namespace unlearn::kernels
