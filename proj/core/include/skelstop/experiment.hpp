#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skelstop/fbm_kernel.hpp"
#include "skelstop/functionals.hpp"
#include "skelstop/regression.hpp"
#include "skelstop/stop_dp.hpp"

namespace skelstop {

// Flat INI-style configuration (sections in brackets, key = value).
// config_to_ini(default_config()) documents every key and default.
struct ExperimentConfig {
  // [experiment]
  std::string model = "bm_sde";  // bm_sde | fbm_drift
  double horizon = 1.0;
  std::vector<int> k_list = {2, 3, 4};  // eps = 2^-k per entry
  std::vector<double> eps_override;     // optional, aligned with k_list
  std::size_t train_paths = 20000;
  std::size_t fresh_paths = 20000;
  std::uint64_t seed = 20240801;
  unsigned threads = 0;  // 0 = hardware concurrency
  std::string output_dir = ".";
  // [state]
  double x0 = 1.0;
  FunctionalSpec drift{"linear_state", {0.06}};
  FunctionalSpec vol{"linear_state", {0.4}};
  double hurst = 0.75;  // fbm_drift only
  int quad_order = 32;  // fbm_drift only
  // [payoff]
  FunctionalSpec payoff{"put", {1.0, 0.06}};
  // [basis]
  BasisSpec basis;
  // [reference]
  std::string reference = "crr";  // crr | self | none
  int crr_steps = 2000;
};

ExperimentConfig default_config();
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
std::string config_to_ini(const ExperimentConfig& cfg);

// Resolution plan: smallest level k whose coupling error bound
// eps^(1-2*lambda) meets the budget e1, assuming eps(k) = 2^-k, so
// k* = -log2(e1)/(1-2*lambda) reported to two decimals, and the step
// budget at that level.  lambda must lie in (hurst - 1/2, 1/2).
struct PlanResult {
  double k_star = 0.0;
  double eps = 0.0;
  std::size_t steps = 0;
};

PlanResult plan_steps(double e1, double hurst, double lambda, double horizon = 1.0);

// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

struct RateRow {
  int k = 0;
  double eps = 0.0;
  std::size_t steps = 0;
  double value = 0.0;        // in-sample DP value
  double lower_bound = 0.0;  // fresh-path estimate
  double lower_se = 0.0;
  double ref_value = 0.0;
  double err = 0.0;  // |value - ref|, 0 on the self-reference anchor row
};

struct RateReport {
  std::vector<RateRow> rows;
  std::string reference;  // crr | self | none
  double final_value = 0.0;
  double final_se = 0.0;
  double slope = 0.0;
  double wall_time_s = 0.0;
};

// Simulates one ensemble at the given resolution with per-path streams
// (seed, stream_base + i); fbm_params must be non-null for fbm_drift.
PathTable simulate_paths(const ExperimentConfig& cfg, double eps, std::size_t steps,
                         std::size_t n_paths, std::uint64_t stream_base,
                         const FbmParams* fbm_params);

// Full rate study: per k simulate, fit, export models_k<k>.json,
// evaluate the fresh lower bound; writes report.csv and summary.json
// into cfg.output_dir.  Identical cfg (including seed) gives a
// byte-identical report.csv; wall time lives only in summary.json.
RateReport run_experiment(const ExperimentConfig& cfg);

// Writers, exposed for tests.
std::string report_csv_text(const RateReport& r);
std::string models_json_text(int k, double eps, const std::vector<ContinuationModel>& models);
std::string summary_json_text(const RateReport& r);

}  // namespace skelstop
