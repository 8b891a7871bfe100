#include "unlearn/unlearn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "unlearn/errors.hpp"
#include "unlearn/kernels.hpp"

namespace unlearn {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::array<std::string_view, 5> kNames = {"retrain", "newton", "influence", "gradient",
                                                    "residual"};

std::span<const std::uint8_t> mask_or_all(const std::vector<std::uint8_t>& keep,
                                          const DeletionRequest& req) {
  if (req.empty()) return {};
  return keep;
}

void check_model(const Dataset& data, const DeletionRequest& req, const Vector& theta) {
  if (theta.size() != data.cols()) throw DimensionError("model dimension differs from data");
  if (!req.empty() && req.n_rows() != data.rows())
    throw DimensionError("deletion request built for another dataset");
}

// sum_{i in S} (theta^T x_i - target_i) x_i
Vector deleted_gradient(const Dataset& data, const DeletionRequest& req, const Vector& theta,
                        std::span<const double> target) {
  Vector g(data.cols(), 0.0);
  for (std::size_t a = 0; a < req.size(); ++a) {
    auto xi = data.x().row(req.indices()[a]);
    axpy(dot(theta, xi) - target[a], xi, g);
  }
  return g;
}

Vector deleted_labels(const Dataset& data, const DeletionRequest& req) {
  Vector y(req.size());
  for (std::size_t a = 0; a < req.size(); ++a) y[a] = data.y()[req.indices()[a]];
  return y;
}

// grad L^k(theta) over the remaining rows.
Vector remaining_gradient(const Dataset& data, const DeletionRequest& req, const Vector& theta,
                          double lambda) {
  const auto keep = req.keep_mask();
  const auto mask = mask_or_all(keep, req);
  const Vector scores = kernels::rows_dot(data.x(), theta);
  Vector resid(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) resid[i] = scores[i] - data.y()[i];
  Vector g = kernels::xt_y(data.x(), resid, mask);
  axpy(lambda, theta, g);
  return g;
}

// grad L^k(theta) from the full Hessian and X^T y: (A theta - X^T y) minus the
// deleted rows' contribution.
Vector downdated_gradient(const Dataset& data, const DeletionRequest& req, const FullFit& full) {
  const Vector& theta = full.model.theta;
  Vector g = matvec(full.hessian, theta);
  for (std::size_t c = 0; c < g.size(); ++c) g[c] -= full.xty[c];
  const Vector gs = deleted_gradient(data, req, theta, deleted_labels(data, req));
  for (std::size_t c = 0; c < g.size(); ++c) g[c] -= gs[c];
  return g;
}

UnlearnResult finish(Method m, Vector theta, Clock::time_point start) {
  UnlearnResult r;
  r.method = m;
  r.theta = std::move(theta);
  r.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
  return r;
}

}  // namespace

std::string_view to_string(Method m) noexcept { return kNames[static_cast<std::size_t>(m)]; }

Method parse_method(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == name) return static_cast<Method>(i);
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = {Method::retrain, Method::newton, Method::influence,
                                              Method::gradient, Method::residual};
  return methods;
}

double distance(std::span<const double> a, std::span<const double> b) {
  return norm2(subtract(a, b));
}

UnlearnResult retrain_exact(const Dataset& data, const DeletionRequest& req, double lambda) {
  const auto start = Clock::now();
  if (!req.empty() && req.n_rows() != data.rows())
    throw DimensionError("deletion request built for another dataset");
  const auto keep = req.keep_mask();
  FullFit fit = fit_full(data, lambda, mask_or_all(keep, req));
  return finish(Method::retrain, std::move(fit.model.theta), start);
}

UnlearnResult newton_update(const Dataset& data, const DeletionRequest& req,
                            const RidgeModel& model_full) {
  const auto start = Clock::now();
  check_model(data, req, model_full.theta);
  const LossDerivatives ld = loss_derivatives(data, req, model_full);
  const Vector step = spd_solve(ld.hessian, ld.grad);
  return finish(Method::newton, subtract(model_full.theta, step), start);
}

UnlearnResult newton_update(const Dataset& data, const DeletionRequest& req, const FullFit& full) {
  const auto start = Clock::now();
  check_model(data, req, full.model.theta);
  Matrix hess = full.hessian;
  const std::size_t d = data.cols();
  for (std::size_t i : req.indices()) {
    auto xi = data.x().row(i);
    for (std::size_t a = 0; a < d; ++a) {
      if (xi[a] == 0.0) continue;
      axpy(-xi[a], xi, hess.row(a));
    }
  }
  const Vector grad = downdated_gradient(data, req, full);
  const Vector step = spd_solve(hess, grad);
  return finish(Method::newton, subtract(full.model.theta, step), start);
}

UnlearnResult influence_update(const Dataset& data, const DeletionRequest& req,
                               const RidgeModel& model_full) {
  const auto start = Clock::now();
  check_model(data, req, model_full.theta);
  const Matrix hess = kernels::gram(data.x(), {}, model_full.lambda);
  const Vector grad = remaining_gradient(data, req, model_full.theta, model_full.lambda);
  const Vector step = spd_solve(hess, grad);
  return finish(Method::influence, subtract(model_full.theta, step), start);
}

UnlearnResult influence_update(const Dataset& data, const DeletionRequest& req,
                               const FullFit& full) {
  const auto start = Clock::now();
  check_model(data, req, full.model.theta);
  const Vector step = full.factor->solve(downdated_gradient(data, req, full));
  return finish(Method::influence, subtract(full.model.theta, step), start);
}

UnlearnResult gradient_update(const Dataset& data, const DeletionRequest& req,
                              const RidgeModel& model_full, std::span<const double> synthetic_labels,
                              double alpha) {
  const auto start = Clock::now();
  check_model(data, req, model_full.theta);
  if (synthetic_labels.size() != req.size())
    throw DimensionError("one synthetic label per deleted point is required");
  if (!(alpha >= 0.0)) throw std::invalid_argument("gradient step must be >= 0");
  const Vector g = deleted_gradient(data, req, model_full.theta, synthetic_labels);
  Vector theta = model_full.theta;
  axpy(-alpha, g, theta);
  return finish(Method::gradient, std::move(theta), start);
}

LowRankPinv pinv_lowrank(std::span<const Vector> deleted_rows) {
  if (deleted_rows.empty()) throw std::invalid_argument("pinv_lowrank: no rows");
  const GramSchmidt gs = mgs(deleted_rows);
  if (gs.rank == 0) throw std::invalid_argument("pinv_lowrank: all rows have zero norm");

  const std::size_t r = gs.rank;
  // C = sum_i c_i c_i^T = coeffs^T coeffs
  Matrix c(r, r);
  for (std::size_t i = 0; i < gs.coeffs.rows(); ++i) {
    auto ci = gs.coeffs.row(i);
    for (std::size_t a = 0; a < r; ++a) {
      if (ci[a] == 0.0) continue;
      axpy(ci[a], ci, c.row(a));
    }
  }
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b) c(a, b) = c(b, a) = 0.5 * (c(a, b) + c(b, a));

  const EigenPairs eig = sym_eig(c);
  const double cutoff = kEigenCutoff * eig.values.front();
  const std::size_t d = gs.basis.front().size();

  LowRankPinv out;
  for (std::size_t e = 0; e < eig.values.size(); ++e) {
    if (!(eig.values[e] > cutoff)) continue;
    Vector v(d, 0.0);
    for (std::size_t j = 0; j < r; ++j) axpy(eig.vectors[e][j], gs.basis[j], v);
    out.inv_values.push_back(1.0 / eig.values[e]);
    out.vectors.push_back(std::move(v));
  }
  return out;
}

Vector fast_apply(const LowRankPinv& pinv, std::span<const double> g) {
  if (pinv.rank() == 0) return Vector(g.size(), 0.0);
  if (pinv.vectors.front().size() != g.size()) throw DimensionError("fast_apply: dimension mismatch");
  Vector out(g.size(), 0.0);
  for (std::size_t i = 0; i < pinv.rank(); ++i)
    axpy(pinv.inv_values[i] * dot(pinv.vectors[i], g), pinv.vectors[i], out);
  return out;
}

Matrix pinv_dense(const LowRankPinv& pinv, std::size_t dim) {
  Matrix m(dim, dim);
  for (std::size_t i = 0; i < pinv.rank(); ++i) {
    const Vector& v = pinv.vectors[i];
    if (v.size() != dim) throw DimensionError("pinv_dense: dimension mismatch");
    for (std::size_t a = 0; a < dim; ++a) axpy(pinv.inv_values[i] * v[a], v, m.row(a));
  }
  return m;
}

double default_gradient_step(std::span<const Vector> deleted_rows) {
  const LowRankPinv pinv = pinv_lowrank(deleted_rows);
  const double smallest_inv = *std::min_element(pinv.inv_values.begin(), pinv.inv_values.end());
  return smallest_inv;
}

UnlearnResult residual_update(const Dataset& data, const DeletionRequest& req,
                              const RidgeModel& model_full, const HatState& hat) {
  const auto start = Clock::now();
  if (req.empty()) throw std::invalid_argument("residual_update: empty deletion request");
  check_model(data, req, model_full.theta);
  const Vector synthetic = dk_predict(hat, data, req);
  const Vector g = deleted_gradient(data, req, model_full.theta, synthetic);
  const LowRankPinv pinv = pinv_lowrank(req.rows_of(data));
  const Vector step = fast_apply(pinv, g);
  return finish(Method::residual, subtract(model_full.theta, step), start);
}

Vector project_onto_span(std::span<const Vector> vectors, std::span<const double> w) {
  Vector p(w.size(), 0.0);
  if (vectors.empty()) return p;
  if (vectors.front().size() != w.size()) throw DimensionError("project_onto_span: dimension mismatch");
  const GramSchmidt gs = mgs(vectors);
  for (const Vector& u : gs.basis) axpy(dot(u, w), u, p);
  return p;
}

UnlearnResult run_method(Method method, const Dataset& data, const DeletionRequest& req,
                         const FullFit& full, const HatState* hat, const MethodOptions& options) {
  const auto start = Clock::now();
  UnlearnResult result;
  switch (method) {
    case Method::retrain:
      result = retrain_exact(data, req, full.model.lambda);
      break;
    case Method::newton:
      result = newton_update(data, req, full);
      break;
    case Method::influence:
      result = influence_update(data, req, full);
      break;
    case Method::gradient:
    case Method::residual: {
      if (hat == nullptr) throw std::invalid_argument("gradient/residual methods need a hat state");
      if (req.empty()) throw std::invalid_argument("gradient/residual methods need k >= 1");
      if (options.iterations == 0) throw std::invalid_argument("iterations must be >= 1");
      const Vector synthetic = dk_predict(*hat, data, req);
      RidgeModel current = full.model;
      if (method == Method::gradient) {
        const double alpha = options.alpha ? *options.alpha : default_gradient_step(req.rows_of(data));
        for (std::size_t t = 0; t < options.iterations; ++t)
          current.theta = gradient_update(data, req, current, synthetic, alpha).theta;
      } else {
        const LowRankPinv pinv = pinv_lowrank(req.rows_of(data));
        for (std::size_t t = 0; t < options.iterations; ++t) {
          const Vector g = deleted_gradient(data, req, current.theta, synthetic);
          current.theta = subtract(current.theta, fast_apply(pinv, g));
        }
      }
      result.method = method;
      result.theta = std::move(current.theta);
      break;
    }
  }
  result.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
  return result;
}

}  // namespace unlearn
