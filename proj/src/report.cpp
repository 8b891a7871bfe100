#include "unlearn/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace unlearn {

namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string fmt(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

json method_names(const std::vector<Method>& methods) {
  json arr = json::array();
  for (Method m : methods) arr.push_back(std::string(to_string(m)));
  return arr;
}

}  // namespace

std::string unlearn_report_json(const UnlearnReport& report, int indent) {
  json j;
  j["schema"] = kUnlearnSchema;
  j["data"] = report.data_path;
  j["n"] = report.n;
  j["d"] = report.d;
  j["k"] = report.deleted.size();
  j["lambda"] = report.lambda;
  j["seed"] = report.seed;
  j["deleted"] = report.deleted;
  j["precompute_ms"] = report.precompute_ms;
  j["theta_full"] = report.theta_full;
  json results = json::array();
  for (const auto& r : report.results) {
    json row;
    row["method"] = std::string(to_string(r.method));
    row["theta_delta_norm"] = distance(r.theta, report.theta_full);
    row["wall_time_ms"] = r.wall_ms();
    row["distance_to_retrain"] = r.distance_to_retrain ? json(*r.distance_to_retrain) : json(nullptr);
    row["theta"] = r.theta;
    results.push_back(std::move(row));
  }
  j["results"] = std::move(results);
  return j.dump(indent);
}

std::string unlearn_report_text(const UnlearnReport& report) {
  std::ostringstream out;
  out << "n=" << report.n << " d=" << report.d << " k=" << report.deleted.size()
      << " lambda=" << report.lambda << " precompute_ms=" << fmt(report.precompute_ms) << '\n';
  for (const auto& r : report.results) {
    out << to_string(r.method) << ": delta_norm=" << fmt(distance(r.theta, report.theta_full))
        << " time_ms=" << fmt(r.wall_ms());
    if (r.distance_to_retrain) out << " distance_to_retrain=" << fmt(*r.distance_to_retrain);
    out << '\n';
  }
  return out.str();
}

std::string fit_report_json(const FitReport& report, bool include_trials, int indent) {
  const FitTrialConfig& c = report.config;
  json j;
  j["schema"] = kFitSchema;
  j["config"] = {{"n", c.n},
                 {"d", c.d},
                 {"k", c.k},
                 {"p", c.p},
                 {"lambda", c.lambda},
                 {"seed", c.seed},
                 {"trials", report.trials},
                 {"methods", method_names(c.methods)},
                 {"signal_scale", c.signal_scale},
                 {"classification", c.classification},
                 {"noise", c.noise}};
  j["baseline"] = {{"mean", number_or_null(report.baseline_mean)},
                   {"median", number_or_null(report.baseline_median)}};
  json methods = json::array();
  for (const auto& s : report.summaries) {
    methods.push_back({{"method", std::string(to_string(s.method))},
                       {"mean_fit", number_or_null(s.mean_fit)},
                       {"median_fit", number_or_null(s.median_fit)},
                       {"mean_ratio", number_or_null(s.mean_ratio)},
                       {"median_ratio", number_or_null(s.median_ratio)},
                       {"mean_time_ms", s.mean_time_ms},
                       {"completed", s.completed},
                       {"failures", s.failures}});
  }
  j["methods"] = std::move(methods);
  if (include_trials) {
    json trials = json::array();
    for (const auto& t : report.trial_records) {
      json results = json::array();
      for (const auto& m : t.methods) {
        json row = {{"method", std::string(to_string(m.method))},
                    {"fit", m.score ? json(*m.score) : json(nullptr)},
                    {"time_ms", m.time_ms}};
        if (!m.error.empty()) row["error"] = m.error;
        results.push_back(std::move(row));
      }
      trials.push_back({{"index", t.index}, {"seed", t.seed}, {"baseline", t.baseline}, {"results", results}});
    }
    j["trials"] = std::move(trials);
  }
  return j.dump(indent);
}

std::string fit_report_csv(const FitReport& report, bool with_header) {
  std::ostringstream out;
  if (with_header) out << "method,d,k,p,trials,mean_fit,median_fit,mean_time_ms\n";
  const FitTrialConfig& c = report.config;
  for (const auto& s : report.summaries) {
    out << to_string(s.method) << ',' << c.d << ',' << c.k << ',' << fmt(c.p) << ',' << report.trials << ','
        << fmt(s.mean_fit) << ',' << fmt(s.median_fit) << ',' << fmt(s.mean_time_ms) << '\n';
  }
  return out.str();
}

std::string bench_report_json(const BenchReport& report, int indent) {
  const BenchConfig& c = report.config;
  json j;
  j["schema"] = kBenchSchema;
  j["config"] = {{"n_sweep", c.n_sweep},
                 {"d", c.d},
                 {"k", c.k},
                 {"p", c.p},
                 {"lambda", c.lambda},
                 {"methods", method_names(c.methods)},
                 {"reps", c.reps},
                 {"seed", c.seed},
                 {"include_precompute", c.include_precompute},
                 {"inject", c.inject},
                 {"threads", report.threads}};
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"method", std::string(to_string(r.method))},
                    {"n", r.n},
                    {"d", r.d},
                    {"k", r.k},
                    {"median_ms", r.median_ms},
                    {"min_ms", r.min_ms},
                    {"max_ms", r.max_ms},
                    {"precompute_ms", r.precompute_ms},
                    {"distance_to_retrain", number_or_null(r.distance_to_retrain)},
                    {"fit_score", r.fit_score ? json(*r.fit_score) : json(nullptr)}});
  }
  j["rows"] = std::move(rows);
  return j.dump(indent);
}

std::string bench_report_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "method,n,d,k,median_ms,min_ms,max_ms,precompute_ms,distance_to_retrain,fit_score\n";
  for (const auto& r : report.rows) {
    out << to_string(r.method) << ',' << r.n << ',' << r.d << ',' << r.k << ',' << fmt(r.median_ms) << ','
        << fmt(r.min_ms) << ',' << fmt(r.max_ms) << ',' << fmt(r.precompute_ms) << ','
        << fmt(r.distance_to_retrain) << ',' << (r.fit_score ? fmt(*r.fit_score) : "") << '\n';
  }
  return out.str();
}

}  // namespace unlearn
