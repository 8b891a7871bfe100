#include "unlearn/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "unlearn/errors.hpp"

namespace unlearn {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("matrix data holds " + std::to_string(data_.size()) +
                         " entries, expected " + std::to_string(rows_ * cols_));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::span<const Vector> rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw DimensionError("from_rows: ragged rows");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

Vector Matrix::row_copy(std::size_t i) const {
  auto r = row(i);
  return {r.begin(), r.end()};
}

Vector Matrix::col_copy(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Matrix::all_finite() const noexcept { return unlearn::all_finite(data_); }

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  const std::size_t n = a.size();
  const double* pa = a.data();
  const double* pb = b.data();
  double s = 0.0;
#pragma omp simd reduction(+ : s)
  for (std::size_t i = 0; i < n; ++i) s += pa[i] * pb[i];
  return s;
}

double norm2(std::span<const double> a) noexcept { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("subtract: length mismatch");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vector add(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("add: length mismatch");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vector scaled(std::span<const double> a, double s) {
  Vector r(a.begin(), a.end());
  for (double& v : r) v *= s;
  return r;
}

bool all_finite(std::span<const double> a) noexcept {
  return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

Vector matvec(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw DimensionError("matvec: dimension mismatch");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

Vector matvec_transposed(const Matrix& a, std::span<const double> x) {
  if (a.rows() != x.size()) throw DimensionError("matvec_transposed: dimension mismatch");
  Vector y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) axpy(x[i], a.row(i), y);
  return y;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t m = 0; m < a.cols(); ++m) axpy(a(i, m), b.row(m), c.row(i));
  return c;
}

double frobenius_norm(const Matrix& a) noexcept { return norm2(a.data()); }

double max_abs(const Matrix& a) noexcept {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lo + hi);
}

GramSchmidt mgs(std::span<const Vector> vectors, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("mgs: tol must be positive");
  GramSchmidt out;
  const std::size_t k = vectors.size();
  if (k == 0) return out;
  const std::size_t d = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != d) throw DimensionError("mgs: vectors differ in dimension");
    if (!all_finite(v)) throw NonFiniteError("mgs: non-finite input");
  }

  Matrix coeffs(k, k);
  out.pivot.assign(k, -1);
  for (std::size_t i = 0; i < k; ++i) {
    Vector w = vectors[i];
    const double xnorm = norm2(w);
    // Two passes: the second one mops up what the first lost to rounding.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < out.basis.size(); ++j) {
        const double c = dot(out.basis[j], w);
        coeffs(i, j) += c;
        axpy(-c, out.basis[j], w);
      }
    }
    const double wnorm = norm2(w);
    if (wnorm <= tol * xnorm || wnorm == 0.0) continue;
    const std::size_t j = out.basis.size();
    coeffs(i, j) = wnorm;
    for (double& v : w) v /= wnorm;
    out.basis.push_back(std::move(w));
    out.pivot[i] = static_cast<long>(j);
  }
  out.rank = out.basis.size();
  out.coeffs = Matrix(k, out.rank);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < out.rank; ++j) out.coeffs(i, j) = coeffs(i, j);
  return out;
}

EigenPairs sym_eig(const Matrix& input) {
  const std::size_t n = input.rows();
  if (input.cols() != n) throw DimensionError("sym_eig: matrix not square");
  if (!input.all_finite()) throw NonFiniteError("sym_eig: non-finite input");
  const double scale = max_abs(input);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(input(i, j) - input(j, i)) > 1e-12 * std::max(scale, 1e-300))
        throw std::invalid_argument("sym_eig: matrix is not symmetric");

  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (input(i, j) + input(j, i));
  // Row i of vt is the i-th eigenvector, so rotations touch contiguous rows.
  Matrix vt = Matrix::identity(n);

  const double frob = frobenius_norm(a);
  for (int sweep = 0; sweep < 100 && frob > 0.0; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-17 * frob) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        if (std::abs(apq) <= 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // a stays exactly symmetric, so rotating rows p and q and mirroring
        // them into the columns is the full two-sided rotation.
        auto ap = a.row(p);
        auto aq = a.row(q);
        for (std::size_t r = 0; r < n; ++r) {
          const double arp = ap[r];
          const double arq = aq[r];
          ap[r] = c * arp - s * arq;
          aq[r] = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          a(r, p) = ap[r];
          a(r, q) = aq[r];
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        auto vp = vt.row(p);
        auto vq = vt.row(q);
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = vp[r];
          const double vrq = vq[r];
          vp[r] = c * vrp - s * vrq;
          vq[r] = s * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenPairs out;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (std::size_t idx : order) {
    out.values.push_back(a(idx, idx));
    Vector col(vt.row(idx).begin(), vt.row(idx).end());
    // Fix the sign so the largest-magnitude component is positive.
    std::size_t big = 0;
    for (std::size_t r = 1; r < n; ++r)
      if (std::abs(col[r]) > std::abs(col[big])) big = r;
    if (col[big] < 0.0)
      for (double& x : col) x = -x;
    out.vectors.push_back(std::move(col));
  }
  return out;
}

Cholesky::Cholesky(const Matrix& a) : lower_(a.rows(), a.cols()) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionError("cholesky: matrix not square");
  for (std::size_t i = 0; i < n; ++i) {
    auto li = lower_.row(i);
    for (std::size_t j = 0; j <= i; ++j) {
      auto lj = lower_.row(j);
      const double s = a(i, j) - dot(li.first(j), lj.first(j));
      if (i == j) {
        if (!(s > 0.0)) {
          throw NotPositiveDefinite("cholesky: non-positive pivot " + std::to_string(s) +
                                    " at row " + std::to_string(i));
        }
        li[i] = std::sqrt(s);
      } else {
        li[j] = s / lj[j];
      }
    }
  }
}

void Cholesky::solve_lower_in_place(std::span<double> b) const noexcept {
  const std::size_t n = size();
  std::size_t first = 0;
  while (first < n && b[first] == 0.0) ++first;
  for (std::size_t j = first; j < n; ++j) {
    auto lj = lower_.row(j);
    b[j] = (b[j] - dot(lj.subspan(first, j - first), b.subspan(first, j - first))) / lj[j];
  }
}

Vector Cholesky::solve_lower(std::span<const double> b) const {
  if (b.size() != size()) throw DimensionError("cholesky solve: dimension mismatch");
  Vector z(b.begin(), b.end());
  solve_lower_in_place(z);
  return z;
}

Vector Cholesky::solve(std::span<const double> b) const {
  Vector x = solve_lower(b);
  const std::size_t n = size();
  // Back substitution with L^T, column-oriented so L is read by rows.
  for (std::size_t jj = n; jj-- > 0;) {
    x[jj] /= lower_(jj, jj);
    const double xj = x[jj];
    auto lj = lower_.row(jj);
    for (std::size_t m = 0; m < jj; ++m) x[m] -= lj[m] * xj;
  }
  return x;
}

Vector spd_solve(const Matrix& a, std::span<const double> b) {
  if (a.rows() != b.size()) throw DimensionError("spd_solve: dimension mismatch");
  return Cholesky(a).solve(b);
}

Vector lin_solve(const Matrix& a_in, std::span<const double> b) {
  const std::size_t n = a_in.rows();
  if (a_in.cols() != n) throw DimensionError("lin_solve: matrix not square");
  if (b.size() != n) throw DimensionError("lin_solve: dimension mismatch");
  Matrix a = a_in;
  Vector x(b.begin(), b.end());
  const double tol = kPivotTol * max_abs(a_in);

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (!(std::abs(a(piv, col)) > tol)) {
      throw SingularMatrix("lin_solve: pivot below tolerance in column " + std::to_string(col));
    }
    if (piv != col) {
      std::swap_ranges(a.row(col).begin(), a.row(col).end(), a.row(piv).begin());
      std::swap(x[col], x[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      x[r] -= f * x[col];
    }
  }
  for (std::size_t r = n; r-- > 0;) {
    double s = x[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
    x[r] = s / a(r, r);
  }
  return x;
}

}  // namespace unlearn
