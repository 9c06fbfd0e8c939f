// Command-line front end: `run <config>` executes a rate study from an
// INI file, `plan` sizes the grid for an error budget, `verify` runs
// the fast property battery.  Exit status 0 on success, 1 on any
// failure (bad config, failed check).
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "skelstop/experiment.hpp"
#include "skelstop/verify.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& output_dir,
            long long seed, int threads) {
  skelstop::ExperimentConfig cfg = skelstop::parse_config_file(config_path);
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (threads >= 0) cfg.threads = static_cast<unsigned>(threads);

  const skelstop::RateReport rep = skelstop::run_experiment(cfg);
  std::printf("%-4s %-10s %-7s %-16s %-16s %-12s\n", "k", "eps", "steps", "value",
              "lower_bound", "lower_se");
  for (const auto& row : rep.rows)
    std::printf("%-4d %-10.6g %-7zu %-16.10g %-16.10g %-12.4g\n", row.k, row.eps,
                row.steps, row.value, row.lower_bound, row.lower_se);
  if (rep.reference != "none" && rep.rows.size() >= 2)
    std::printf("reference %s, log-log error slope %.4f\n", rep.reference.c_str(),
                rep.slope);
  std::printf("wrote report.csv, summary.json and models_k<k>.json to %s\n",
              cfg.output_dir.c_str());
  return 0;
}

int cmd_plan(double e1, double hurst, double lambda, double horizon) {
  const skelstop::PlanResult plan = skelstop::plan_steps(e1, hurst, lambda, horizon);
  std::printf("k_star %.2f\n", plan.k_star);
  std::printf("eps    %.10g\n", plan.eps);
  std::printf("steps  %zu\n", plan.steps);
  return 0;
}

int cmd_verify(long long seed, double dh_scale) {
  skelstop::VerifyOptions opt;
  if (seed >= 0) opt.seed = static_cast<std::uint64_t>(seed);
  opt.dh_scale = dh_scale;
  const skelstop::VerifyReport rep = skelstop::verify_suite(opt);
  for (const auto& c : rep.checks)
    std::printf("[%s] %-28s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.detail.c_str());
  std::printf("%zu checks, %s\n", rep.checks.size(),
              rep.all_pass() ? "all passed" : "FAILURES present");
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-skeleton optimal stopping simulator"};
  app.require_subcommand(0, 1);

  bool print_defaults = false;
  app.add_flag("--print-defaults", print_defaults,
               "Print the default configuration as INI and exit");

  auto* run = app.add_subcommand("run", "Run a rate study from a config file");
  std::string config_path, output_dir;
  long long run_seed = -1;
  int run_threads = -1;
  run->add_option("config", config_path, "INI config path")->required();
  run->add_option("--output-dir", output_dir, "Override [experiment] output_dir");
  run->add_option("--seed", run_seed, "Override [experiment] seed");
  run->add_option("--threads", run_threads, "Override [experiment] threads (0 = all cores)");

  auto* plan = app.add_subcommand("plan", "Size the grid for an error budget");
  double e1 = 0.0, hurst = 0.0, lambda = 0.0, horizon = 1.0;
  plan->add_option("--e1", e1, "Error budget in (0,1)")->required();
  plan->add_option("--hurst", hurst, "Hurst index in (1/2,1)")->required();
  plan->add_option("--lambda", lambda, "Rate exponent in (hurst-1/2, 1/2)")->required();
  plan->add_option("--horizon", horizon, "Time horizon (default 1)");

  auto* verify = app.add_subcommand("verify", "Run the fast property battery");
  long long verify_seed = -1;
  double dh_scale = 1.0;
  verify->add_option("--seed", verify_seed, "Battery seed");
  verify->add_option("--inject-dh-scale", dh_scale,
                     "Corrupt the kernel norm constant by this factor (negative control)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (print_defaults) {
      std::fputs(skelstop::config_to_ini(skelstop::default_config()).c_str(), stdout);
      return 0;
    }
    if (run->parsed()) return cmd_run(config_path, output_dir, run_seed, run_threads);
    if (plan->parsed()) return cmd_plan(e1, hurst, lambda, horizon);
    if (verify->parsed()) return cmd_verify(verify_seed, dh_scale);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  std::fputs(app.help().c_str(), stdout);
  return 0;
}
