#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "unlearn/numerics.hpp"

namespace unlearn {

/// Feature rows X (n x d) with real labels y. No intercept column is added;
/// append a constant feature if one is wanted.
class Dataset {
 public:
  Dataset() = default;
  Dataset(Matrix x, Vector y, std::vector<std::string> feature_names = {});

  const Matrix& x() const noexcept { return x_; }
  const Vector& y() const noexcept { return y_; }
  const std::vector<std::string>& feature_names() const noexcept { return names_; }
  std::size_t rows() const noexcept { return x_.rows(); }
  std::size_t cols() const noexcept { return x_.cols(); }

  /// Rows listed in `indices`, in that order.
  Dataset subset(std::span<const std::size_t> indices) const;

 private:
  Matrix x_;
  Vector y_;
  std::vector<std::string> names_;
};

/// A set of distinct row indices to forget; stored sorted ascending.
class DeletionRequest {
 public:
  DeletionRequest() = default;
  DeletionRequest(std::vector<std::size_t> indices, std::size_t n_rows);

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  std::size_t n_rows() const noexcept { return n_rows_; }

  /// Per-row mask with 0 on deleted rows.
  std::vector<std::uint8_t> keep_mask() const;
  /// The dataset's deleted rows, in request order.
  std::vector<Vector> rows_of(const Dataset& data) const;
  /// Indices of the rows that survive the deletion.
  std::vector<std::size_t> remaining() const;

 private:
  std::vector<std::size_t> indices_;
  std::size_t n_rows_ = 0;
};

struct RidgeModel {
  Vector theta;
  double lambda = 0.0;
};

constexpr double kDefaultLambda = 1e-3;

/// Everything computed from the full data before any deletion request:
/// theta_full, the full Hessian X^T X + lambda I, its Cholesky factor and X^T y.
struct FullFit {
  RidgeModel model;
  Matrix hessian;
  std::shared_ptr<const Cholesky> factor;
  Vector xty;
};

/// Solves (X^T X + lambda I) theta = X^T y over the kept rows.
FullFit fit_full(const Dataset& data, double lambda, std::span<const std::uint8_t> keep = {});
RidgeModel train_full(const Dataset& data, double lambda);

double predict(const RidgeModel& model, std::span<const double> x);
/// +1 when the score is > 0, otherwise -1.
int predicted_class(const RidgeModel& model, std::span<const double> x);
/// Fraction of rows whose predicted class matches sign(y).
double classification_accuracy(const RidgeModel& model, const Dataset& data);

struct LossDerivatives {
  double loss = 0.0;
  Vector grad;
  Matrix hessian;
};

/// Loss, gradient and Hessian of
///   sum_{i not in exclude} 1/2 (theta^T x_i - y_i)^2 + lambda/2 ||theta||^2.
LossDerivatives loss_derivatives(const Dataset& data, const DeletionRequest& exclude,
                                 const RidgeModel& model);

}  // namespace unlearn
