#include "unlearn/bench.hpp"

#include <algorithm>
#include <chrono>

#include "unlearn/data.hpp"
#include "unlearn/fit.hpp"
#include "unlearn/kernels.hpp"

namespace unlearn {

TimingSummary time_repeated(const std::function<double()>& fn, std::size_t reps) {
  if (reps == 0) throw std::invalid_argument("reps must be >= 1");
  fn();
  std::vector<double> times;
  times.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) times.push_back(fn());
  TimingSummary s;
  s.median_ms = median(times);
  s.min_ms = *std::min_element(times.begin(), times.end());
  s.max_ms = *std::max_element(times.begin(), times.end());
  return s;
}

BenchReport run_bench(const BenchConfig& config) {
  if (config.n_sweep.empty()) throw std::invalid_argument("bench: empty n sweep");
  if (config.methods.empty()) throw std::invalid_argument("bench: no methods selected");
  using Clock = std::chrono::steady_clock;

  BenchReport report;
  report.config = config;
  report.threads = kernels::max_threads();

  for (std::size_t si = 0; si < config.n_sweep.size(); ++si) {
    const std::size_t n = config.n_sweep[si];
    if (config.k == 0 || config.k >= n) throw std::invalid_argument("bench needs 1 <= k < n");
    const std::uint64_t seed = derive_seed(config.seed, n);
    Dataset data = gen_synthetic_sparse(n, config.d, config.p, derive_seed(seed, 0));
    const DeletionRequest req(sample_indices(n, config.k, derive_seed(seed, 1)), n);
    if (config.inject) data = inject_feature(data, req);
    const std::size_t d = data.cols();

    const auto pre_start = Clock::now();
    const FullFit full = fit_full(data, config.lambda);
    const HatState hat(data, full, HatMode::eager);
    const double precompute_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - pre_start).count();

    const Vector oracle = retrain_exact(data, req, config.lambda).theta;

    for (Method m : config.methods) {
      Vector theta;
      const TimingSummary t = time_repeated(
          [&] {
            UnlearnResult r = run_method(m, data, req, full, &hat, config.method_options);
            theta = std::move(r.theta);
            return r.wall_ms();
          },
          config.reps);

      BenchRow row;
      row.method = m;
      row.n = n;
      row.d = d;
      row.k = config.k;
      row.median_ms = t.median_ms;
      row.min_ms = t.min_ms;
      row.max_ms = t.max_ms;
      row.precompute_ms = precompute_ms;
      if (config.include_precompute && m != Method::retrain) {
        row.median_ms += precompute_ms;
        row.min_ms += precompute_ms;
        row.max_ms += precompute_ms;
      }
      row.distance_to_retrain = distance(theta, oracle);
      if (config.inject) row.fit_score = fit_score(theta, d - 1);
      report.rows.push_back(row);
    }
  }
  return report;
}

}  // namespace unlearn
