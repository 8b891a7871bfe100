#include "unlearn/errors.hpp"
#include "unlearn/kernels.hpp"

namespace unlearn::kernels::serial {

namespace {
bool kept(RowMask keep, std::size_t i) { return keep.empty() || keep[i] != 0; }

void check_mask(const Matrix& x, RowMask keep) {
  if (!keep.empty() && keep.size() != x.rows()) throw DimensionError("row mask length mismatch");
}
}  // namespace

Matrix gram(const Matrix& x, RowMask keep, double ridge) {
  check_mask(x, keep);
  const std::size_t d = x.cols();
  Matrix g(d, d);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    if (!kept(keep, i)) continue;
    auto xi = x.row(i);
    for (std::size_t a = 0; a < d; ++a) {
      const double xa = xi[a];
      if (xa == 0.0) continue;
      auto ga = g.row(a);
      for (std::size_t b = a; b < d; ++b) ga[b] += xa * xi[b];
    }
  }
  for (std::size_t a = 0; a < d; ++a) {
    g(a, a) += ridge;
    for (std::size_t b = a + 1; b < d; ++b) g(b, a) = g(a, b);
  }
  return g;
}

Vector xt_y(const Matrix& x, std::span<const double> y, RowMask keep) {
  check_mask(x, keep);
  if (y.size() != x.rows()) throw DimensionError("xt_y: label length mismatch");
  Vector out(x.cols(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    if (!kept(keep, i)) continue;
    auto xi = x.row(i);
    for (std::size_t c = 0; c < x.cols(); ++c) out[c] += y[i] * xi[c];
  }
  return out;
}

Vector rows_dot(const Matrix& x, std::span<const double> theta) {
  if (theta.size() != x.cols()) throw DimensionError("rows_dot: dimension mismatch");
  Vector out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = dot(x.row(i), theta);
  return out;
}

Matrix whiten_rows(const Matrix& x, const Cholesky& factor) {
  if (factor.size() != x.cols()) throw DimensionError("whiten_rows: dimension mismatch");
  Matrix z = x;
  for (std::size_t i = 0; i < z.rows(); ++i) factor.solve_lower_in_place(z.row(i));
  return z;
}

Matrix outer_rows(const Matrix& z) {
  const std::size_t n = z.rows();
  Matrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) h(i, j) = h(j, i) = dot(z.row(i), z.row(j));
  return h;
}

Matrix project_rows(const Matrix& x, const Matrix& g) {
  if (x.cols() != g.rows()) throw DimensionError("project_rows: dimension mismatch");
  Matrix out(x.rows(), g.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto xi = x.row(i);
    auto oi = out.row(i);
    for (std::size_t m = 0; m < x.cols(); ++m) {
      if (xi[m] == 0.0) continue;
      axpy(xi[m], g.row(m), oi);
    }
  }
  return out;
}

}  // namespace unlearn::kernels::serial
