#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "unlearn/unlearn.hpp"

namespace unlearn {

struct BenchConfig {
  std::vector<std::size_t> n_sweep = {1000, 10000, 100000};
  std::size_t d = 500;
  std::size_t k = 10;
  double p = 1.0;
  double lambda = kDefaultLambda;
  std::vector<Method> methods = {Method::retrain, Method::influence, Method::residual};
  std::size_t reps = 5;
  std::uint64_t seed = 0;
  /// Add the precomputation time (theta_full, H, residuals) to every method
  /// that relies on it.
  bool include_precompute = false;
  /// Inject a feature on the deleted group so each row also gets a FIT score.
  bool inject = false;
  MethodOptions method_options;
};

struct BenchRow {
  Method method = Method::retrain;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t k = 0;
  double median_ms = 0.0;
  double min_ms = 0.0;
  double max_ms = 0.0;
  double precompute_ms = 0.0;
  double distance_to_retrain = 0.0;
  std::optional<double> fit_score;
};

struct BenchReport {
  BenchConfig config;
  int threads = 1;
  std::vector<BenchRow> rows;
};

struct TimingSummary {
  double median_ms = 0.0;
  double min_ms = 0.0;
  double max_ms = 0.0;
};

/// Runs `fn` once untimed, then `reps` times; each call reports its own
/// elapsed time in milliseconds.
TimingSummary time_repeated(const std::function<double()>& fn, std::size_t reps);

/// For every n in the sweep: generate data, precompute (untimed), then time
/// each method `reps` times. Distances to the retrained model are computed
/// outside the timed region.
BenchReport run_bench(const BenchConfig& config);

}  // namespace unlearn
