#include "unlearn/fit.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "unlearn/data.hpp"
#include "unlearn/errors.hpp"

namespace unlearn {

Dataset inject_feature(const Dataset& data, const DeletionRequest& group, double scale) {
  if (group.empty()) throw std::invalid_argument("inject_feature: empty group");
  if (group.n_rows() != data.rows()) throw DimensionError("inject_feature: group built for another dataset");
  const std::size_t d = data.cols();
  Matrix x(data.rows(), d + 1);
  for (std::size_t i = 0; i < data.rows(); ++i)
    std::copy_n(data.x().row(i).begin(), d, x.row(i).begin());
  for (std::size_t i : group.indices()) x(i, d) = scale * data.y()[i];
  std::vector<std::string> names = data.feature_names();
  if (!names.empty()) names.push_back("injected");
  return Dataset(std::move(x), data.y(), std::move(names));
}

double fit_score(std::span<const double> theta, std::size_t injected_index) {
  if (injected_index >= theta.size()) throw std::out_of_range("fit_score: index out of range");
  return std::abs(theta[injected_index]);
}

const MethodSummary& FitReport::summary(Method m) const {
  for (const auto& s : summaries)
    if (s.method == m) return s;
  throw std::out_of_range("method not part of this report");
}

FitTrial run_fit_trial(const FitTrialConfig& config, std::size_t index) {
  if (config.k == 0 || config.k >= config.n) throw std::invalid_argument("FIT needs 1 <= k < n");
  FitTrial trial;
  trial.index = index;
  trial.seed = derive_seed(config.seed, index);

  SyntheticOptions synth;
  synth.noise = config.noise;
  synth.classification = config.classification;
  const Dataset base = gen_synthetic_sparse(config.n, config.d, config.p, derive_seed(trial.seed, 0), synth);
  const DeletionRequest group(sample_indices(config.n, config.k, derive_seed(trial.seed, 1)), config.n);
  const Dataset data = inject_feature(base, group, config.signal_scale);
  const std::size_t injected = config.d;

  const FullFit full = fit_full(data, config.lambda);
  trial.baseline = fit_score(full.model.theta, injected);

  const bool needs_hat = std::any_of(config.methods.begin(), config.methods.end(), [](Method m) {
    return m == Method::gradient || m == Method::residual;
  });
  std::optional<HatState> hat;
  if (needs_hat) hat.emplace(data, full, HatMode::lazy);

  for (Method m : config.methods) {
    MethodTrial mt;
    mt.method = m;
    try {
      const UnlearnResult r = run_method(m, data, group, full, hat ? &*hat : nullptr, config.method_options);
      mt.score = fit_score(r.theta, injected);
      mt.time_ms = r.wall_ms();
    } catch (const DegenerateDeletion& e) {
      mt.error = e.what();
    } catch (const NotPositiveDefinite& e) {
      mt.error = e.what();
    }
    trial.methods.push_back(std::move(mt));
  }
  return trial;
}

FitReport run_fit_suite(const FitTrialConfig& config, std::size_t trials, bool parallel_trials) {
  if (trials == 0) throw std::invalid_argument("run_fit_suite: trials must be >= 1");
  if (config.methods.empty()) throw std::invalid_argument("run_fit_suite: no methods selected");
  // Validate once up front so configuration errors are not swallowed per trial.
  if (config.k == 0 || config.k >= config.n) throw std::invalid_argument("FIT needs 1 <= k < n");
  if (!(config.p > 0.0 && config.p <= 1.0)) throw std::invalid_argument("sparsity p must lie in (0, 1]");

  FitReport report;
  report.config = config;
  report.trials = trials;
  report.trial_records.resize(trials);

  std::exception_ptr failure;
  const long long count = static_cast<long long>(trials);
#pragma omp parallel for schedule(dynamic, 1) if (parallel_trials)
  for (long long t = 0; t < count; ++t) {
    try {
      report.trial_records[static_cast<std::size_t>(t)] = run_fit_trial(config, static_cast<std::size_t>(t));
    } catch (...) {
#pragma omp critical(fit_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> baselines;
  for (const auto& tr : report.trial_records) baselines.push_back(tr.baseline);
  double sum = 0.0;
  for (double b : baselines) sum += b;
  report.baseline_mean = sum / static_cast<double>(trials);
  report.baseline_median = median(baselines);

  for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
    MethodSummary s;
    s.method = config.methods[mi];
    std::vector<double> scores, ratios;
    double time_sum = 0.0;
    for (const auto& tr : report.trial_records) {
      const MethodTrial& mt = tr.methods[mi];
      time_sum += mt.time_ms;
      if (!mt.score) {
        ++s.failures;
        continue;
      }
      scores.push_back(*mt.score);
      ratios.push_back(tr.baseline > 0.0 ? *mt.score / tr.baseline : 0.0);
    }
    s.completed = scores.size();
    if (!scores.empty()) {
      double ssum = 0.0, rsum = 0.0;
      for (double v : scores) ssum += v;
      for (double v : ratios) rsum += v;
      s.mean_fit = ssum / static_cast<double>(scores.size());
      s.mean_ratio = rsum / static_cast<double>(ratios.size());
      s.median_fit = median(scores);
      s.median_ratio = median(ratios);
    } else {
      s.mean_fit = s.median_fit = s.mean_ratio = s.median_ratio = std::nan("");
    }
    s.mean_time_ms = time_sum / static_cast<double>(trials);
    report.summaries.push_back(s);
  }
  return report;
}

}  // namespace unlearn
