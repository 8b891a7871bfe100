#pragma once

#include <chrono>
#include <optional>
#include <string_view>
#include <vector>

#include "unlearn/leverage.hpp"
#include "unlearn/model.hpp"

namespace unlearn {

enum class Method { retrain, newton, influence, gradient, residual };

std::string_view to_string(Method m) noexcept;
/// Accepts the lower-case names printed by to_string.
Method parse_method(std::string_view name);
const std::vector<Method>& all_methods();

/// Pseudoinverse of N = sum_i x_i x_i^T over the deleted rows, kept as its
/// nonzero eigenpairs: N^+ = sum_i inv_values[i] v_i v_i^T.
struct LowRankPinv {
  Vector inv_values;
  std::vector<Vector> vectors;
  std::size_t rank() const noexcept { return vectors.size(); }
};

struct UnlearnResult {
  Method method = Method::retrain;
  Vector theta;
  /// Time spent in the method after theta_full / H / residuals exist.
  std::chrono::nanoseconds wall_time{0};
  std::optional<double> distance_to_retrain;

  double wall_ms() const noexcept { return std::chrono::duration<double, std::milli>(wall_time).count(); }
};

/// Eigenvalues below this fraction of the largest are treated as zero.
constexpr double kEigenCutoff = 1e-12;

/// Ground truth: train on the rows that survive the deletion.
UnlearnResult retrain_exact(const Dataset& data, const DeletionRequest& req, double lambda);

/// theta_full - [hess L^k(theta_full)]^{-1} grad L^k(theta_full). Exact for the
/// quadratic ridge loss. This overload rebuilds the post-deletion Hessian from
/// the remaining rows.
UnlearnResult newton_update(const Dataset& data, const DeletionRequest& req,
                            const RidgeModel& model_full);
/// Same step, with the post-deletion Hessian obtained by downdating the
/// precomputed full Hessian (O(k d^2 + d^3), independent of n).
UnlearnResult newton_update(const Dataset& data, const DeletionRequest& req, const FullFit& full);

/// theta_full - [hess L^full(theta_full)]^{-1} grad L^k(theta_full).
UnlearnResult influence_update(const Dataset& data, const DeletionRequest& req,
                               const RidgeModel& model_full);
/// Reuses the precomputed full-Hessian factor (O(d^2 + k d)).
UnlearnResult influence_update(const Dataset& data, const DeletionRequest& req,
                               const FullFit& full);

/// Scalar gradient step on the synthetic points (x_i, y^k_i), i in S:
///   theta_full - alpha * sum_i (theta_full^T x_i - y^k_i) x_i.
UnlearnResult gradient_update(const Dataset& data, const DeletionRequest& req,
                              const RidgeModel& model_full, std::span<const double> synthetic_labels,
                              double alpha);

/// 1 / ||N||_2 for N = sum_i x_i x_i^T.
double default_gradient_step(std::span<const Vector> deleted_rows);

/// Gram-Schmidt the rows, eigendecompose the small coefficient Gram matrix
/// C = sum_i c_i c_i^T, and lift its eigenvectors back through the basis.
LowRankPinv pinv_lowrank(std::span<const Vector> deleted_rows);
/// sum_i inv_values[i] (v_i^T g) v_i in O(k d).
Vector fast_apply(const LowRankPinv& pinv, std::span<const double> g);
/// The d x d matrix sum_i inv_values[i] v_i v_i^T.
Matrix pinv_dense(const LowRankPinv& pinv, std::size_t dim);

/// Projection-residual update. Synthetic labels come from dk_predict, the
/// step matrix is the pseudoinverse of N; the result is
/// theta_full + proj_{span(x_S)}(theta_k - theta_full) in O(k^2 d).
UnlearnResult residual_update(const Dataset& data, const DeletionRequest& req,
                              const RidgeModel& model_full, const HatState& hat);

/// Orthogonal projection of w onto span(vectors), via an mgs basis.
Vector project_onto_span(std::span<const Vector> vectors, std::span<const double> w);

struct MethodOptions {
  /// Gradient step size; default_gradient_step() when unset.
  std::optional<double> alpha;
  /// Repeated steps for gradient / residual with fixed synthetic labels.
  std::size_t iterations = 1;
};

/// Dispatches one method using precomputed state. `hat` is required for
/// gradient and residual. The returned wall_time covers the whole method,
/// synthetic-label computation included.
UnlearnResult run_method(Method method, const Dataset& data, const DeletionRequest& req,
                         const FullFit& full, const HatState* hat, const MethodOptions& options = {});

double distance(std::span<const double> a, std::span<const double> b);

}  // namespace unlearn
