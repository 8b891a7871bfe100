#pragma once

// Machine-readable reports. Field names are stable; docs/report_schema.json
// describes the JSON documents.

#include <cstdint>
#include <string>
#include <vector>

#include "unlearn/bench.hpp"
#include "unlearn/fit.hpp"
#include "unlearn/unlearn.hpp"

namespace unlearn {

inline constexpr const char* kUnlearnSchema = "unlearn.unlearn_report/1";
inline constexpr const char* kFitSchema = "unlearn.fit_report/1";
inline constexpr const char* kBenchSchema = "unlearn.bench_report/1";

struct UnlearnReport {
  std::string data_path;
  std::size_t n = 0;
  std::size_t d = 0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> deleted;
  double precompute_ms = 0.0;
  Vector theta_full;
  std::vector<UnlearnResult> results;
};

std::string unlearn_report_json(const UnlearnReport& report, int indent = 2);
/// One human-readable line per method.
std::string unlearn_report_text(const UnlearnReport& report);

std::string fit_report_json(const FitReport& report, bool include_trials = true, int indent = 2);
/// Columns: method,d,k,p,trials,mean_fit,median_fit,mean_time_ms
std::string fit_report_csv(const FitReport& report, bool with_header = true);

std::string bench_report_json(const BenchReport& report, int indent = 2);
/// Columns: method,n,d,k,median_ms,min_ms,max_ms,precompute_ms,distance_to_retrain,fit_score
std::string bench_report_csv(const BenchReport& report);

}  // namespace unlearn
