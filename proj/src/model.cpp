#include "unlearn/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "unlearn/errors.hpp"
#include "unlearn/kernels.hpp"

namespace unlearn {

Dataset::Dataset(Matrix x, Vector y, std::vector<std::string> feature_names)
    : x_(std::move(x)), y_(std::move(y)), names_(std::move(feature_names)) {
  if (x_.rows() == 0) throw DimensionError("dataset needs at least one row");
  if (y_.size() != x_.rows()) {
    throw DimensionError("dataset has " + std::to_string(x_.rows()) + " rows but " +
                         std::to_string(y_.size()) + " labels");
  }
  if (!names_.empty() && names_.size() != x_.cols())
    throw DimensionError("feature name count differs from column count");
  if (!x_.all_finite() || !all_finite(y_)) throw NonFiniteError("dataset has non-finite entries");
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Matrix x(indices.size(), cols());
  Vector y(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= rows()) throw std::out_of_range("subset: row index out of range");
    std::copy_n(x_.row(indices[r]).begin(), cols(), x.row(r).begin());
    y[r] = y_[indices[r]];
  }
  return Dataset(std::move(x), std::move(y), names_);
}

DeletionRequest::DeletionRequest(std::vector<std::size_t> indices, std::size_t n_rows)
    : indices_(std::move(indices)), n_rows_(n_rows) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
    throw std::invalid_argument("deletion request has duplicate indices");
  if (!indices_.empty() && indices_.back() >= n_rows)
    throw std::out_of_range("deletion index " + std::to_string(indices_.back()) +
                            " out of range for " + std::to_string(n_rows) + " rows");
  if (indices_.size() >= n_rows && n_rows > 0)
    throw std::invalid_argument("deletion request must leave at least one row");
}

std::vector<std::uint8_t> DeletionRequest::keep_mask() const {
  std::vector<std::uint8_t> keep(n_rows_, 1);
  for (std::size_t i : indices_) keep[i] = 0;
  return keep;
}

std::vector<Vector> DeletionRequest::rows_of(const Dataset& data) const {
  if (data.rows() != n_rows_) throw DimensionError("deletion request built for another dataset");
  std::vector<Vector> rows;
  rows.reserve(indices_.size());
  for (std::size_t i : indices_) rows.push_back(data.x().row_copy(i));
  return rows;
}

std::vector<std::size_t> DeletionRequest::remaining() const {
  std::vector<std::size_t> out;
  out.reserve(n_rows_ - indices_.size());
  auto it = indices_.begin();
  for (std::size_t i = 0; i < n_rows_; ++i) {
    if (it != indices_.end() && *it == i) {
      ++it;
      continue;
    }
    out.push_back(i);
  }
  return out;
}

FullFit fit_full(const Dataset& data, double lambda, std::span<const std::uint8_t> keep) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("lambda must be finite and >= 0");
  FullFit fit;
  fit.hessian = kernels::gram(data.x(), keep, lambda);
  fit.xty = kernels::xt_y(data.x(), data.y(), keep);
  try {
    fit.factor = std::make_shared<const Cholesky>(fit.hessian);
  } catch (const NotPositiveDefinite& e) {
    throw NotPositiveDefinite(std::string("singular normal equations (rank-deficient X with "
                                          "lambda = 0?): ") +
                              e.what());
  }
  fit.model.theta = fit.factor->solve(fit.xty);
  fit.model.lambda = lambda;
  return fit;
}

RidgeModel train_full(const Dataset& data, double lambda) { return fit_full(data, lambda).model; }

double predict(const RidgeModel& model, std::span<const double> x) {
  if (x.size() != model.theta.size()) throw DimensionError("predict: dimension mismatch");
  return dot(model.theta, x);
}

int predicted_class(const RidgeModel& model, std::span<const double> x) {
  return predict(model, x) > 0.0 ? 1 : -1;
}

double classification_accuracy(const RidgeModel& model, const Dataset& data) {
  const Vector scores = kernels::rows_dot(data.x(), model.theta);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const int truth = data.y()[i] > 0.0 ? 1 : -1;
    const int guess = scores[i] > 0.0 ? 1 : -1;
    hits += truth == guess;
  }
  return static_cast<double>(hits) / static_cast<double>(scores.size());
}

LossDerivatives loss_derivatives(const Dataset& data, const DeletionRequest& exclude,
                                 const RidgeModel& model) {
  if (model.theta.size() != data.cols()) throw DimensionError("loss: dimension mismatch");
  if (exclude.n_rows() != data.rows() && !exclude.empty())
    throw DimensionError("exclusion request built for another dataset");
  const auto keep = exclude.keep_mask();
  const std::span<const std::uint8_t> mask = exclude.empty() ? std::span<const std::uint8_t>{}
                                                             : std::span<const std::uint8_t>(keep);

  LossDerivatives out;
  const Vector scores = kernels::rows_dot(data.x(), model.theta);
  Vector resid(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const bool kept = mask.empty() || mask[i];
    resid[i] = kept ? scores[i] - data.y()[i] : 0.0;
    out.loss += 0.5 * resid[i] * resid[i];
  }
  out.loss += 0.5 * model.lambda * dot(model.theta, model.theta);
  out.grad = kernels::xt_y(data.x(), resid, mask);
  axpy(model.lambda, model.theta, out.grad);
  out.hessian = kernels::gram(data.x(), mask, model.lambda);
  return out;
}

}  // namespace unlearn
