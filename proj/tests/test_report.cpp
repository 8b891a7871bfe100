#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "unlearn/report.hpp"

using namespace unlearn;
using nlohmann::json;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(UnlearnReport, JsonFields) {
  UnlearnReport r;
  r.data_path = "toy.csv";
  r.n = 2;
  r.d = 1;
  r.lambda = 1e-3;
  r.deleted = {0};
  r.theta_full = {1.0};
  UnlearnResult a;
  a.method = Method::residual;
  a.theta = {2.0};
  a.distance_to_retrain = 0.0;
  UnlearnResult b;
  b.method = Method::influence;
  b.theta = {std::numeric_limits<double>::quiet_NaN()};
  r.results = {a, b};

  const json j = json::parse(unlearn_report_json(r));
  EXPECT_EQ(j["schema"], kUnlearnSchema);
  EXPECT_EQ(j["k"], 1);
  ASSERT_EQ(j["results"].size(), 2u);
  EXPECT_EQ(j["results"][0]["method"], "residual");
  EXPECT_EQ(j["results"][0]["distance_to_retrain"], 0.0);
  EXPECT_TRUE(j["results"][1]["distance_to_retrain"].is_null());
  EXPECT_TRUE(j["results"][1]["theta"][0].is_null());
  EXPECT_EQ(lines(unlearn_report_text(r)).size(), 3u);
}

TEST(FitReportOut, CsvAndJsonAgree) {
  FitTrialConfig cfg;
  cfg.n = 120;
  cfg.d = 10;
  cfg.k = 2;
  cfg.seed = 3;
  const FitReport r = run_fit_suite(cfg, 3);
  const auto rows = lines(fit_report_csv(r));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "method,d,k,p,trials,mean_fit,median_fit,mean_time_ms");
  EXPECT_EQ(rows[1].rfind("retrain,10,2,", 0), 0u);
  EXPECT_EQ(lines(fit_report_csv(r, false)).size(), 3u);

  const json j = json::parse(fit_report_json(r));
  EXPECT_EQ(j["schema"], kFitSchema);
  EXPECT_EQ(j["trials"].size(), 3u);
  EXPECT_EQ(j["methods"].size(), 3u);
  EXPECT_EQ(j["methods"][0]["mean_fit"], 0.0);
  EXPECT_FALSE(json::parse(fit_report_json(r, false)).contains("trials"));
}

TEST(BenchReportOut, RowsAndNulls) {
  BenchReport r;
  r.config.n_sweep = {10, 20};
  BenchRow row;
  row.method = Method::residual;
  row.n = 10;
  row.d = 3;
  row.k = 1;
  row.median_ms = 0.5;
  r.rows = {row, row};
  r.rows[1].fit_score = 0.25;
  const auto csv = lines(bench_report_csv(r));
  ASSERT_EQ(csv.size(), 3u);
  EXPECT_EQ(csv[0], "method,n,d,k,median_ms,min_ms,max_ms,precompute_ms,distance_to_retrain,fit_score");
  EXPECT_EQ(csv[1].back(), ',');
  const json j = json::parse(bench_report_json(r));
  EXPECT_EQ(j["schema"], kBenchSchema);
  EXPECT_TRUE(j["rows"][0]["fit_score"].is_null());
  EXPECT_EQ(j["rows"][1]["fit_score"], 0.25);
}
