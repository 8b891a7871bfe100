#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "unlearn/bench.hpp"
#include "unlearn/data.hpp"
#include "unlearn/errors.hpp"
#include "unlearn/fit.hpp"
#include "unlearn/leverage.hpp"
#include "unlearn/report.hpp"
#include "unlearn/unlearn.hpp"

namespace {

using namespace unlearn;

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kDegenerate = 4 };

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("UNLEARN_SEED")) {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(env, &pos);
      if (pos == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("UNLEARN_SEED is not an unsigned integer: '") + env + "'");
  }
  return 0;
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& name : names) {
    if (name == "all") {
      for (Method m : all_methods())
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
      continue;
    }
    Method m;
    try {
      m = parse_method(name);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  if (out.empty()) throw UsageError("no methods selected");
  return out;
}

std::size_t parse_size(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size() || s.front() == '-') throw UsageError("bad " + what + ": '" + s + "'");
  return static_cast<std::size_t>(v);
}

// "3,17,42" deletes those rows; "random:K" deletes K rows drawn with the seed.
std::vector<std::size_t> parse_delete(const std::string& spec, std::size_t n, std::uint64_t seed) {
  constexpr std::string_view kRandom = "random:";
  if (spec.rfind(kRandom, 0) == 0) {
    const std::size_t k = parse_size(spec.substr(kRandom.size()), "deletion count");
    if (k == 0 || k >= n)
      throw DataError("deletion count must be in [1, " + std::to_string(n - 1) + "], got " + std::to_string(k));
    return sample_indices(n, k, derive_seed(seed, 0xde1e7e));
  }
  std::vector<std::size_t> idx;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = spec.find(',', start);
    const std::string tok = spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    idx.push_back(parse_size(tok, "deletion index"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return idx;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw DataError("failed writing '" + path + "'");
}

struct GenArgs {
  std::size_t n = 0, d = 0;
  double p = 1.0;
  double noise = 0.1;
  bool classification = false;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_gen_data(const GenArgs& a) {
  if (!(a.p > 0.0 && a.p <= 1.0)) throw UsageError("--p must be in (0, 1]");
  const Dataset data =
      gen_synthetic_sparse(a.n, a.d, a.p, resolve_seed(a.seed), SyntheticOptions{a.noise, a.classification});
  if (a.out.empty() || a.out == "-")
    std::cout << format_numeric_csv(data);
  else
    write_numeric_csv(data, a.out);
  return kOk;
}

struct TrainArgs {
  std::string data;
  bool header = false;
  double lambda = kDefaultLambda;
  std::string out;
};

int cmd_train(const TrainArgs& a) {
  const Dataset data = load_numeric_csv(a.data, a.header);
  const RidgeModel model = train_full(data, a.lambda);
  nlohmann::json j = {{"lambda", model.lambda},
                      {"n", data.rows()},
                      {"d", data.cols()},
                      {"theta", model.theta},
                      {"train_accuracy", classification_accuracy(model, data)}};
  if (a.out.empty() || a.out == "-")
    std::cout << j.dump(2) << '\n';
  else
    write_file(a.out, j.dump(2) + "\n");
  return kOk;
}

struct UnlearnArgs {
  std::string data;
  bool header = false;
  std::string del;
  std::vector<std::string> methods = {"residual"};
  double lambda = kDefaultLambda;
  std::optional<double> alpha;
  std::size_t iterations = 1;
  std::optional<std::uint64_t> seed;
  bool json = false;
  bool include_precompute = false;
};

int cmd_unlearn(const UnlearnArgs& a) {
  const std::vector<Method> methods = parse_methods(a.methods);
  const std::uint64_t seed = resolve_seed(a.seed);
  const Dataset data = load_numeric_csv(a.data, a.header);
  std::vector<std::size_t> indices = parse_delete(a.del, data.rows(), seed);
  const DeletionRequest req = [&] {
    try {
      return DeletionRequest(std::move(indices), data.rows());
    } catch (const std::logic_error& e) {
      throw DataError(e.what());
    }
  }();

  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  const FullFit full = fit_full(data, a.lambda);
  const HatState hat(data, full, HatMode::eager);
  const double precompute_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();

  // Untimed reference. Without ridge the remaining rows can be rank
  // deficient; the distances are then simply not reported.
  std::optional<Vector> oracle;
  try {
    oracle = retrain_exact(data, req, a.lambda).theta;
  } catch (const DataError&) {
  } catch (const NotPositiveDefinite&) {
  }

  MethodOptions opts;
  opts.alpha = a.alpha;
  opts.iterations = a.iterations;

  UnlearnReport report;
  report.data_path = a.data;
  report.n = data.rows();
  report.d = data.cols();
  report.lambda = a.lambda;
  report.seed = seed;
  report.deleted = req.indices();
  report.precompute_ms = precompute_ms;
  report.theta_full = full.model.theta;
  for (Method m : methods) {
    UnlearnResult r = run_method(m, data, req, full, &hat, opts);
    if (a.include_precompute && m != Method::retrain)
      r.wall_time += std::chrono::duration_cast<std::chrono::nanoseconds>(
          std::chrono::duration<double, std::milli>(precompute_ms));
    if (oracle) r.distance_to_retrain = distance(r.theta, *oracle);
    report.results.push_back(std::move(r));
  }
  std::cout << (a.json ? unlearn_report_json(report) + "\n" : unlearn_report_text(report));
  return kOk;
}

struct FitArgs {
  FitTrialConfig config;
  std::vector<std::string> methods = {"retrain", "influence", "residual"};
  std::size_t trials = 50;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  bool classification = false;
  bool parallel_trials = false;
  bool no_timing = false;
  std::string out;
};

void strip_timing(FitReport& r) {
  for (auto& s : r.summaries) s.mean_time_ms = 0.0;
  for (auto& t : r.trial_records)
    for (auto& m : t.methods) m.time_ms = 0.0;
}

int cmd_fit(FitArgs a) {
  if (!(a.config.p > 0.0 && a.config.p <= 1.0)) throw UsageError("--p must be in (0, 1]");
  if (a.trials == 0) throw UsageError("--trials must be >= 1");
  if (a.config.k == 0 || a.config.k >= a.config.n) throw UsageError("--k must satisfy 1 <= k < n");
  a.config.methods = parse_methods(a.methods);
  a.config.seed = resolve_seed(a.seed);
  a.config.classification = a.classification;
  a.config.method_options.alpha = a.alpha;
  FitReport report = run_fit_suite(a.config, a.trials, a.parallel_trials);
  if (a.no_timing) strip_timing(report);
  if (a.out.empty() || a.out == "-") {
    std::cout << fit_report_csv(report);
  } else {
    write_file(a.out + ".csv", fit_report_csv(report));
    write_file(a.out + ".json", fit_report_json(report) + "\n");
  }
  return kOk;
}

struct BenchArgs {
  BenchConfig config;
  std::vector<std::string> methods = {"retrain", "influence", "residual"};
  std::optional<std::uint64_t> seed;
  std::string out;
  bool json = false;
};

int cmd_bench(BenchArgs a) {
  if (!(a.config.p > 0.0 && a.config.p <= 1.0)) throw UsageError("--p must be in (0, 1]");
  for (std::size_t n : a.config.n_sweep)
    if (a.config.k == 0 || a.config.k >= n) throw UsageError("--k must satisfy 1 <= k < n for every n");
  a.config.methods = parse_methods(a.methods);
  a.config.seed = resolve_seed(a.seed);
  const BenchReport report = run_bench(a.config);
  if (a.out.empty() || a.out == "-") {
    std::cout << (a.json ? bench_report_json(report) + "\n" : bench_report_csv(report));
  } else {
    write_file(a.out + ".csv", bench_report_csv(report));
    write_file(a.out + ".json", bench_report_json(report) + "\n");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unlearning for ridge-regularized linear models"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen-data", "write a synthetic sparse dataset as CSV");
  g->add_option("--n", gen.n, "rows")->required()->check(CLI::PositiveNumber);
  g->add_option("--d", gen.d, "features")->required()->check(CLI::PositiveNumber);
  g->add_option("--p", gen.p, "probability a feature entry is nonzero");
  g->add_option("--noise", gen.noise, "label noise standard deviation")->check(CLI::NonNegativeNumber);
  g->add_flag("--classification", gen.classification, "emit +-1 labels");
  g->add_option("--seed", gen.seed, "RNG seed (falls back to UNLEARN_SEED)");
  g->add_option("--out", gen.out, "output path, '-' for stdout");

  TrainArgs train;
  auto* t = app.add_subcommand("train", "fit the full ridge model");
  t->add_option("--data", train.data, "numeric CSV, last column = label")->required();
  t->add_flag("--header", train.header, "first row is a header");
  t->add_option("--lambda", train.lambda, "ridge strength")->check(CLI::NonNegativeNumber);
  t->add_option("--out", train.out, "output JSON path");

  UnlearnArgs un;
  auto* u = app.add_subcommand("unlearn", "delete rows from a trained model");
  u->add_option("--data", un.data, "numeric CSV, last column = label")->required();
  u->add_flag("--header", un.header, "first row is a header");
  u->add_option("--delete", un.del, "row indices '0,5,9' or 'random:K'")->required();
  u->add_option("--method", un.methods, "retrain,newton,influence,gradient,residual or all")->delimiter(',');
  u->add_option("--lambda", un.lambda, "ridge strength")->check(CLI::NonNegativeNumber);
  u->add_option("--alpha", un.alpha, "gradient step size (default 1/||N||)")->check(CLI::PositiveNumber);
  u->add_option("--iterations", un.iterations, "steps for gradient/residual")->check(CLI::PositiveNumber);
  u->add_option("--seed", un.seed, "RNG seed for random deletions");
  u->add_flag("--json", un.json, "print a JSON report");
  u->add_flag("--include-precompute", un.include_precompute, "add fit + hat-matrix time to each method");

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "run the feature injection test");
  f->add_option("--n", fit.config.n, "rows")->check(CLI::PositiveNumber);
  f->add_option("--d", fit.config.d, "features before injection")->check(CLI::PositiveNumber);
  f->add_option("--k", fit.config.k, "rows deleted per trial")->check(CLI::PositiveNumber);
  f->add_option("--p", fit.config.p, "feature density");
  f->add_option("--lambda", fit.config.lambda, "ridge strength")->check(CLI::NonNegativeNumber);
  f->add_option("--trials", fit.trials, "number of trials");
  f->add_option("--seed", fit.seed, "base seed");
  f->add_option("--methods", fit.methods, "comma-separated method list")->delimiter(',');
  f->add_option("--alpha", fit.alpha, "gradient step size")->check(CLI::PositiveNumber);
  f->add_option("--signal-scale", fit.config.signal_scale, "injected value multiplier");
  f->add_flag("--classification", fit.classification, "threshold labels to +-1");
  f->add_flag("--parallel-trials", fit.parallel_trials, "run trials concurrently");
  f->add_flag("--no-timing", fit.no_timing, "zero all time fields for reproducible files");
  f->add_option("--out", fit.out, "output prefix; writes PREFIX.csv and PREFIX.json");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "time methods across dataset sizes");
  b->add_option("--n-sweep", bench.config.n_sweep, "comma-separated row counts")->delimiter(',');
  b->add_option("--d", bench.config.d, "features")->check(CLI::PositiveNumber);
  b->add_option("--k", bench.config.k, "rows deleted")->check(CLI::PositiveNumber);
  b->add_option("--p", bench.config.p, "feature density");
  b->add_option("--lambda", bench.config.lambda, "ridge strength")->check(CLI::NonNegativeNumber);
  b->add_option("--methods", bench.methods, "comma-separated method list")->delimiter(',');
  b->add_option("--reps", bench.config.reps, "timed repetitions (median reported)")->check(CLI::Range(5, 100000));
  b->add_option("--seed", bench.seed, "base seed");
  b->add_flag("--include-precompute", bench.config.include_precompute, "add precomputation to each method");
  b->add_flag("--inject", bench.config.inject, "inject a feature and report FIT scores");
  b->add_flag("--json", bench.json, "print JSON instead of CSV when writing to stdout");
  b->add_option("--out", bench.out, "output prefix; writes PREFIX.csv and PREFIX.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*g) return cmd_gen_data(gen);
    if (*t) return cmd_train(train);
    if (*u) return cmd_unlearn(un);
    if (*f) return cmd_fit(fit);
    if (*b) return cmd_bench(bench);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DegenerateDeletion& e) {
    std::cerr << "degenerate deletion: " << e.what() << '\n';
    return kDegenerate;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const NonFiniteError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const DimensionError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const NotPositiveDefinite& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kUsage;
}
