#include "unlearn/pipeline.hpp"

#include <cmath>
#include <random>
#include <string>

#include "unlearn/data.hpp"
#include "unlearn/errors.hpp"
#include "unlearn/kernels.hpp"

namespace unlearn {

FeatureMap FeatureMap::identity() { return FeatureMap(Kind::identity, 0, 0, nullptr); }

FeatureMap FeatureMap::random_projection(std::size_t out_dim, std::uint64_t seed) {
  if (out_dim == 0) throw std::invalid_argument("random projection needs out_dim >= 1");
  return FeatureMap(Kind::random_projection, out_dim, seed, nullptr);
}

FeatureMap FeatureMap::precomputed(Matrix table) {
  if (table.rows() == 0 || table.cols() == 0) throw DataError("feature table is empty");
  if (!table.all_finite()) throw NonFiniteError("feature table has non-finite entries");
  const std::size_t cols = table.cols();
  return FeatureMap(Kind::precomputed_table, cols, 0, std::make_shared<const Matrix>(std::move(table)));
}

FeatureMap FeatureMap::from_table_file(const std::filesystem::path& path, bool has_header) {
  return precomputed(load_feature_table(path, has_header));
}

std::size_t FeatureMap::output_dim(std::size_t input_dim) const noexcept {
  return kind_ == Kind::identity ? input_dim : out_dim_;
}

Matrix FeatureMap::projection(std::size_t input_dim) const {
  if (kind_ != Kind::random_projection) throw std::logic_error("not a random projection map");
  std::mt19937_64 rng(derive_seed(seed_, input_dim));
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(out_dim_));
  Matrix g(input_dim, out_dim_);
  for (double& v : g.data()) v = normal(rng) * scale;
  return g;
}

Matrix FeatureMap::encode_rows(const Matrix& x) const {
  switch (kind_) {
    case Kind::identity:
      return x;
    case Kind::random_projection:
      return kernels::project_rows(x, projection(x.cols()));
    case Kind::precomputed_table: {
      if (table_->rows() < x.rows()) {
        throw DataError("feature table has " + std::to_string(table_->rows()) + " rows, dataset has " +
                        std::to_string(x.rows()));
      }
      Matrix out(x.rows(), table_->cols());
      std::copy_n(table_->data().begin(), out.data().size(), out.data().begin());
      return out;
    }
  }
  return x;
}

Dataset encode(const FeatureMap& map, const Dataset& data) {
  if (map.kind() == FeatureMap::Kind::identity) return data;
  return Dataset(map.encode_rows(data.x()), data.y());
}

namespace {
bool needs_hat(Method m) { return m == Method::gradient || m == Method::residual; }
}  // namespace

UnlearnResult unlearn_head(const FeatureMap& map, const Dataset& data, const DeletionRequest& req,
                           Method method, const HeadOptions& options) {
  const Dataset encoded = encode(map, data);
  const FullFit full = fit_full(encoded, options.lambda);
  std::optional<HatState> hat;
  if (needs_hat(method)) hat.emplace(encoded, full, HatMode::lazy);
  return run_method(method, encoded, req, full, hat ? &*hat : nullptr, options.method);
}

HeadAccuracy head_accuracy(const FeatureMap& map, const Dataset& train, const Dataset& heldout,
                           const DeletionRequest& req, Method method, const HeadOptions& options) {
  if (train.cols() != heldout.cols()) throw DimensionError("train and held-out widths differ");
  // Tables are indexed by training row, so they cannot encode new inputs.
  if (map.kind() == FeatureMap::Kind::precomputed_table)
    throw std::invalid_argument("precomputed tables cannot encode held-out rows");
  const Dataset enc_train = encode(map, train);
  const FullFit full = fit_full(enc_train, options.lambda);
  std::optional<HatState> hat;
  if (needs_hat(method)) hat.emplace(enc_train, full, HatMode::lazy);
  const UnlearnResult r = run_method(method, enc_train, req, full, hat ? &*hat : nullptr, options.method);

  const Dataset enc_test = encode(map, heldout);
  HeadAccuracy acc;
  acc.before = classification_accuracy(full.model, enc_test);
  acc.after = classification_accuracy(RidgeModel{r.theta, options.lambda}, enc_test);
  return acc;
}

}  // namespace unlearn
