#pragma once

// Last-layer unlearning: a frozen feature map turns raw rows into features,
// a ridge head is trained on them, and the unlearning methods act on the
// head alone.

#include <cstdint>
#include <filesystem>
#include <memory>

#include "unlearn/unlearn.hpp"

namespace unlearn {

class FeatureMap {
 public:
  enum class Kind { identity, random_projection, precomputed_table };

  static FeatureMap identity();
  /// x -> G^T x with G (d_in x out_dim) i.i.d. N(0, 1) / sqrt(out_dim), drawn
  /// from `seed`.
  static FeatureMap random_projection(std::size_t out_dim, std::uint64_t seed);
  /// Row i of the dataset maps to row i of `table`.
  static FeatureMap precomputed(Matrix table);
  static FeatureMap from_table_file(const std::filesystem::path& path, bool has_header = false);

  Kind kind() const noexcept { return kind_; }
  /// Output width for inputs of width `input_dim`.
  std::size_t output_dim(std::size_t input_dim) const noexcept;
  std::uint64_t seed() const noexcept { return seed_; }

  /// The projection matrix used for inputs of width `input_dim`.
  Matrix projection(std::size_t input_dim) const;
  Matrix encode_rows(const Matrix& x) const;

 private:
  FeatureMap(Kind kind, std::size_t out_dim, std::uint64_t seed, std::shared_ptr<const Matrix> table)
      : kind_(kind), out_dim_(out_dim), seed_(seed), table_(std::move(table)) {}

  Kind kind_;
  std::size_t out_dim_;
  std::uint64_t seed_;
  std::shared_ptr<const Matrix> table_;
};

/// Same labels, features replaced by the map's output.
Dataset encode(const FeatureMap& map, const Dataset& data);

struct HeadOptions {
  double lambda = kDefaultLambda;
  MethodOptions method;
};

/// Encodes, trains the head and applies `method` in encoded space.
UnlearnResult unlearn_head(const FeatureMap& map, const Dataset& data, const DeletionRequest& req,
                           Method method, const HeadOptions& options = {});

struct HeadAccuracy {
  double before = 0.0;
  double after = 0.0;
};

/// Held-out classification accuracy of the head before and after unlearning.
HeadAccuracy head_accuracy(const FeatureMap& map, const Dataset& train, const Dataset& heldout,
                           const DeletionRequest& req, Method method, const HeadOptions& options = {});

}  // namespace unlearn
