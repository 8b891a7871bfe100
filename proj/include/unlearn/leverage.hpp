#pragma once

#include <memory>

#include "unlearn/model.hpp"

namespace unlearn {

/// How much of the hat matrix to prepare before a deletion request arrives.
enum class HatMode {
  /// Whiten every row up front (O(n d^2)); each H block then costs O(k^2 d).
  eager,
  /// Keep only the factor; whiten the requested rows on demand (O(k d^2)).
  lazy,
};

/// Ridge hat matrix H = X (X^T X + lambda I)^{-1} X^T plus full-data
/// residuals r_i = y_i - x_i^T theta_full.
///
/// H is held in factored form H = Z Z^T with Z = X L^{-T}, where L L^T is the
/// Cholesky factor of X^T X + lambda I. This keeps memory at O(n d) so large
/// n stays practical; `dense()` materializes the n x n matrix when wanted.
class HatState {
 public:
  HatState(const Dataset& data, const FullFit& fit, HatMode mode = HatMode::eager);

  double lambda() const noexcept { return lambda_; }
  std::size_t size() const noexcept { return residuals_.size(); }
  HatMode mode() const noexcept { return z_.empty() ? HatMode::lazy : HatMode::eager; }
  const Vector& residuals() const noexcept { return residuals_; }

  /// H restricted to rows/cols `idx`.
  Matrix block(const Dataset& data, std::span<const std::size_t> idx) const;
  double entry(const Dataset& data, std::size_t i, std::size_t j) const;
  Matrix dense(const Dataset& data) const;

 private:
  Vector whitened_row(const Dataset& data, std::size_t i) const;

  std::shared_ptr<const Cholesky> factor_;
  Matrix z_;
  Vector residuals_;
  double lambda_ = 0.0;
};

HatState hat_matrix(const Dataset& data, double lambda);
HatState hat_matrix(const Dataset& data, const FullFit& fit, HatMode mode = HatMode::eager);

/// Leave-k-out predictions at the deleted points: y_S - e with
/// (I - H_SS) e = r_S. Equals x_i^T theta_k of the exactly retrained ridge
/// model. Throws DegenerateDeletion when (I - H_SS) is singular.
Vector dk_predict(const HatState& state, const Dataset& data, const DeletionRequest& req);

/// Same quantity through the diagonal-scaled form: D = diag(1/(1-H_ii)),
/// T_ij = [i != j] H_ij / (1 - H_ii), e = (I - T)^{-1} D r_S. Kept as a
/// cross-check of dk_predict.
Vector dk_predict_factored(const HatState& state, const Dataset& data, const DeletionRequest& req);

/// Classical leave-one-out shortcut y_i - r_i / (1 - H_ii).
double loo_predict(const HatState& state, const Dataset& data, std::size_t i);

}  // namespace unlearn
