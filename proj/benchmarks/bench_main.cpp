// Microbenchmarks for the hot paths: exit-time sampling, kernel
// evaluation, driver accumulation, one regression stage, and the
// binomial reference.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "skelstop/exit_time.hpp"
#include "skelstop/fbm_kernel.hpp"
#include "skelstop/oracles.hpp"
#include "skelstop/regression.hpp"
#include "skelstop/rng.hpp"
#include "skelstop/skeleton.hpp"

namespace {

void bm_exit_time_draw(benchmark::State& state) {
  skelstop::RngStream rng(1, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(skelstop::sample_unit_exit_time(rng));
  }
}
BENCHMARK(bm_exit_time_draw);

void bm_kernel_eval(benchmark::State& state) {
  const skelstop::FbmParams p = skelstop::make_fbm_params(0.75, 32);
  double s = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(skelstop::kernel_K(p, 1.0, s));
    s = 0.1 + std::fmod(s + 0.21, 0.8);
  }
}
BENCHMARK(bm_kernel_eval);

void bm_driver_e64(benchmark::State& state) {
  const skelstop::FbmParams p = skelstop::make_fbm_params(0.75, 24);
  skelstop::RngStream rng(1, 2);
  const skelstop::Skeleton s = skelstop::build_skeleton({0.125, 1, 64}, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(skelstop::driver_from_skeleton(p, s, s.steps()));
  }
}
BENCHMARK(bm_driver_e64);

void bm_regression_stage(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  skelstop::RngStream rng(1, 3);
  skelstop::BasisSpec basis;
  basis.degree = 3;
  const std::size_t p = skelstop::feature_count(basis);
  std::vector<double> design(n * p);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = 1.0 + 0.1 * rng.next_normal();
    skelstop::build_features(basis, {}, 0.5, x, x + 0.05, nullptr, nullptr,
                             design.data() + i * p);
    y[i] = std::max(1.0 - x, 0.0) + 0.01 * rng.next_normal();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(skelstop::fit_continuation(design, y, n, basis, 3));
  }
}
BENCHMARK(bm_regression_stage)->Arg(10000)->Arg(100000);

void bm_crr_american(benchmark::State& state) {
  skelstop::CrrSpec spec;
  spec.steps = 500;
  spec.s0 = 1.0;
  spec.up = std::exp(0.4 * std::sqrt(1.0 / 500));
  spec.down = 1.0 / spec.up;
  const double grow = std::exp(0.06 / 500);
  spec.prob_up = (grow - spec.down) / (spec.up - spec.down);
  spec.discount_per_step = 1.0 / grow;
  spec.payoff = [](double s) { return std::max(1.0 - s, 0.0); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(skelstop::crr_american(spec));
  }
}
BENCHMARK(bm_crr_american);

}  // namespace

BENCHMARK_MAIN();
