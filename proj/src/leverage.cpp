#include "unlearn/leverage.hpp"

#include <string>

#include "unlearn/errors.hpp"
#include "unlearn/kernels.hpp"

namespace unlearn {

HatState::HatState(const Dataset& data, const FullFit& fit, HatMode mode)
    : factor_(fit.factor), lambda_(fit.model.lambda) {
  if (!factor_ || factor_->size() != data.cols())
    throw DimensionError("hat state: fit does not match the dataset");
  const Vector scores = kernels::rows_dot(data.x(), fit.model.theta);
  residuals_.resize(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) residuals_[i] = data.y()[i] - scores[i];
  if (mode == HatMode::eager) z_ = kernels::whiten_rows(data.x(), *factor_);
}

Vector HatState::whitened_row(const Dataset& data, std::size_t i) const {
  if (!z_.empty()) return z_.row_copy(i);
  Vector z = data.x().row_copy(i);
  factor_->solve_lower_in_place(z);
  return z;
}

Matrix HatState::block(const Dataset& data, std::span<const std::size_t> idx) const {
  if (data.rows() != size()) throw DimensionError("hat state built for another dataset");
  std::vector<Vector> z;
  z.reserve(idx.size());
  for (std::size_t i : idx) {
    if (i >= size()) throw std::out_of_range("hat block: index out of range");
    z.push_back(whitened_row(data, i));
  }
  const std::size_t k = idx.size();
  Matrix h(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b) h(a, b) = h(b, a) = dot(z[a], z[b]);
  return h;
}

double HatState::entry(const Dataset& data, std::size_t i, std::size_t j) const {
  const std::size_t idx[2] = {i, j};
  return block(data, idx)(0, 1);
}

Matrix HatState::dense(const Dataset& data) const {
  if (data.rows() != size()) throw DimensionError("hat state built for another dataset");
  if (!z_.empty()) return kernels::outer_rows(z_);
  return kernels::outer_rows(kernels::whiten_rows(data.x(), *factor_));
}

HatState hat_matrix(const Dataset& data, double lambda) {
  return HatState(data, fit_full(data, lambda), HatMode::eager);
}

HatState hat_matrix(const Dataset& data, const FullFit& fit, HatMode mode) {
  return HatState(data, fit, mode);
}

namespace {

void check_request(const HatState& state, const Dataset& data, const DeletionRequest& req) {
  if (req.empty()) throw std::invalid_argument("dk_predict: empty deletion request");
  if (req.n_rows() != data.rows() || state.size() != data.rows())
    throw DimensionError("dk_predict: request, hat state and data disagree on row count");
}

Vector predictions_from_errors(const Dataset& data, const DeletionRequest& req, const Vector& e) {
  Vector out(req.size());
  for (std::size_t a = 0; a < req.size(); ++a) out[a] = data.y()[req.indices()[a]] - e[a];
  return out;
}

Vector deleted_residuals(const HatState& state, const DeletionRequest& req) {
  Vector r(req.size());
  for (std::size_t a = 0; a < req.size(); ++a) r[a] = state.residuals()[req.indices()[a]];
  return r;
}

}  // namespace

Vector dk_predict(const HatState& state, const Dataset& data, const DeletionRequest& req) {
  check_request(state, data, req);
  Matrix m = state.block(data, req.indices());
  const std::size_t k = req.size();
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) m(a, b) = (a == b ? 1.0 : 0.0) - m(a, b);

  Vector e;
  try {
    e = lin_solve(m, deleted_residuals(state, req));
  } catch (const SingularMatrix&) {
    throw DegenerateDeletion("I - H_SS is singular: the deleted rows carry a direction no "
                             "remaining row supports (leverage near one)");
  }
  return predictions_from_errors(data, req, e);
}

Vector dk_predict_factored(const HatState& state, const Dataset& data,
                           const DeletionRequest& req) {
  check_request(state, data, req);
  const Matrix h = state.block(data, req.indices());
  const std::size_t k = req.size();
  const Vector r = deleted_residuals(state, req);

  Vector dr(k);
  Matrix i_minus_t(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    const double denom = 1.0 - h(a, a);
    if (!(denom > 0.0)) throw DegenerateDeletion("leverage score of a deleted point is >= 1");
    dr[a] = r[a] / denom;
    for (std::size_t b = 0; b < k; ++b) i_minus_t(a, b) = (a == b) ? 1.0 : -h(a, b) / denom;
  }
  Vector e;
  try {
    e = lin_solve(i_minus_t, dr);
  } catch (const SingularMatrix&) {
    throw DegenerateDeletion("I - T is singular for the deleted group");
  }
  return predictions_from_errors(data, req, e);
}

double loo_predict(const HatState& state, const Dataset& data, std::size_t i) {
  const double hii = state.entry(data, i, i);
  if (!(hii < 1.0)) throw DegenerateDeletion("leverage score is >= 1");
  return data.y()[i] - state.residuals()[i] / (1.0 - hii);
}

}  // namespace unlearn
