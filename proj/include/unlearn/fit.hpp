#pragma once

// Feature Injection Test: plant a column that is nonzero only on a target
// group and equal to the group's labels, delete the group, and read the
// weight each unlearning method leaves on that column. Exact retraining
// (with lambda > 0) drives it to zero; smaller is better.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "unlearn/unlearn.hpp"

namespace unlearn {

/// Appends one column equal to scale * y_i on `group` and 0 elsewhere.
Dataset inject_feature(const Dataset& data, const DeletionRequest& group, double scale = 1.0);

/// |theta[injected_index]|
double fit_score(std::span<const double> theta, std::size_t injected_index);

struct FitTrialConfig {
  std::size_t n = 2000;
  std::size_t d = 500;
  std::size_t k = 5;
  double p = 0.1;
  double lambda = kDefaultLambda;
  std::uint64_t seed = 0;
  std::vector<Method> methods = {Method::retrain, Method::influence, Method::residual};
  double signal_scale = 1.0;
  /// Labels thresholded to +1 / -1 (otherwise real-valued regression labels).
  bool classification = false;
  double noise = 0.1;
  MethodOptions method_options;
};

struct MethodTrial {
  Method method = Method::retrain;
  std::optional<double> score;  ///< unset when the method failed
  double time_ms = 0.0;
  std::string error;
};

struct FitTrial {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double baseline = 0.0;  ///< |theta_full| on the injected column
  std::vector<MethodTrial> methods;
};

struct MethodSummary {
  Method method = Method::retrain;
  double mean_fit = 0.0;
  double median_fit = 0.0;
  /// score / baseline, averaged per trial.
  double mean_ratio = 0.0;
  double median_ratio = 0.0;
  double mean_time_ms = 0.0;
  std::size_t completed = 0;
  std::size_t failures = 0;
};

struct FitReport {
  FitTrialConfig config;
  std::size_t trials = 0;
  double baseline_mean = 0.0;
  double baseline_median = 0.0;
  std::vector<MethodSummary> summaries;
  std::vector<FitTrial> trial_records;

  const MethodSummary& summary(Method m) const;
};

/// One seeded trial; deterministic given (config, index).
FitTrial run_fit_trial(const FitTrialConfig& config, std::size_t index);

/// `trials` independent trials aggregated in trial order. With
/// `parallel_trials` the trials run concurrently; the report is identical.
FitReport run_fit_suite(const FitTrialConfig& config, std::size_t trials,
                        bool parallel_trials = false);

}  // namespace unlearn
