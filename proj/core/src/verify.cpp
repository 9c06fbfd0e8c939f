#include "skelstop/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "skelstop/exit_time.hpp"
#include "skelstop/fbm_kernel.hpp"
#include "skelstop/functionals.hpp"
#include "skelstop/oracles.hpp"
#include "skelstop/rng.hpp"
#include "skelstop/skeleton.hpp"
#include "skelstop/state_models.hpp"
#include "skelstop/stop_dp.hpp"

namespace skelstop {
namespace {

std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

}  // namespace

VerifyReport verify_suite(const VerifyOptions& opt) {
  VerifyReport rep;
  const auto add = [&rep](const std::string& name, bool pass, std::string detail) {
    rep.checks.push_back({name, pass, std::move(detail)});
  };

  // Exit-time sampler: mean, transform at lambda = -1, sign balance.
  {
    RngStream rng(opt.seed, stream_domain::kOracle + 1);
    const std::size_t n = 200000;
    double mean = 0.0, mgf = 0.0, pos = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double tau = sample_unit_exit_time(rng);
      mean += tau;
      mgf += std::exp(-tau);
      if (rng.next_sign() > 0) pos += 1.0;
    }
    mean /= n;
    mgf /= n;
    pos /= n;
    add("exit_time_mean", std::abs(mean - 1.0) < 0.01,
        fmt("mean %.5f vs 1 (tol 0.01)", mean, 0));
    add("exit_time_mgf", std::abs(mgf - exit_mgf(-1.0)) < 0.005,
        fmt("E[e^-tau] %.5f vs %.5f (tol 0.005)", mgf, exit_mgf(-1.0)));
    add("sign_balance", std::abs(pos - 0.5) < 0.005,
        fmt("P(+) %.4f vs 0.5 (tol 0.005)", pos, 0));
  }

  // CDF branch consistency at the series switch point.
  {
    const double below = exit_time_cdf(0.64);
    const double above = exit_time_cdf(0.6400000001);
    add("exit_cdf_branch_seam", std::abs(below - above) < 1e-8,
        fmt("F(0.64-) %.10f vs F(0.64+) %.10f", below, above));
  }

  // Kernel calibration: unit mass at t = 1 and the variance identity
  // at an interior time (checks kernel shape, not only scale).
  {
    const FbmParams p = make_fbm_params(0.75, 32);
    double mass = 0.0, var_half = 0.0;
    // Graded panel sum; endpoint singularities are integrable.
    const int n_panels = 4000;
    for (int i = 0; i < n_panels; ++i) {
      {
        const double a = std::pow(i / double(n_panels), 2.0);
        const double b = std::pow((i + 1) / double(n_panels), 2.0);
        const double m = 0.5 * (a + b);
        if (m > 0.0 && m < 1.0) {
          const double kk = kernel_K(p, 1.0, m);
          mass += kk * kk * (b - a);
        }
      }
      {
        const double a = 0.5 * std::pow(i / double(n_panels), 2.0);
        const double b = 0.5 * std::pow((i + 1) / double(n_panels), 2.0);
        const double m = 0.5 * (a + b);
        if (m > 0.0 && m < 0.5) {
          const double kk = kernel_K(p, 0.5, m);
          var_half += kk * kk * (b - a);
        }
      }
    }
    add("kernel_unit_mass", std::abs(mass - 1.0) < 1e-3,
        fmt("int K(1,.)^2 = %.6f vs 1", mass, 0));
    const double want = std::pow(0.5, 2.0 * p.hurst);
    add("kernel_variance_identity", std::abs(var_half - want) < 1e-3,
        fmt("int K(0.5,.)^2 = %.6f vs %.6f", var_half, want));
  }

  // Driver variance scaling: Var B_H(T_m) should match E[T_m^2H] at the
  // last grid time before the horizon (self-similarity of the
  // calibrated kernel).  The dh_scale hook corrupts norm_const and must
  // break exactly this check.
  {
    FbmParams p = make_fbm_params(0.6, 24);
    p.norm_const *= opt.dh_scale;
    const double eps = 0.125;
    const std::size_t steps = num_steps(eps, 1.0, 1);
    const std::size_t n = 8000;
    double s1 = 0.0, s2 = 0.0, want = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      RngStream rng(opt.seed, stream_domain::kOracle + (1ull << 20) + i);
      const Skeleton sk = build_skeleton({eps, 1, steps}, rng);
      const GridPosition at = grid_query(sk, 1.0);
      const std::size_t m = std::max<std::size_t>(at.count, 1);
      const double v = driver_value_at(p, sk, m);
      s1 += v;
      s2 += v * v;
      want += std::pow(sk.times[m - 1], 2.0 * p.hurst);
    }
    const double var = s2 / n - (s1 / n) * (s1 / n);
    want /= n;
    add("driver_variance_scaling", std::abs(var / want - 1.0) < 0.10,
        fmt("Var B_H(T_m) = %.4f vs %.4f (rel tol 0.10)", var, want));
  }

  // Deterministic-clock envelope: residuals vanish and the root value
  // matches an independent binomial pricer with the same moves.
  {
    const double eps = 0.25, r = 0.06, sigma = 0.4, strike = 1.0, x0 = 1.0;
    const int stages = 10;
    const auto drift = make_coefficient({"linear_state", {r}});
    const auto vol = make_coefficient({"linear_state", {sigma}});
    const auto payoff = make_payoff({"put", {strike, r}});
    const double horizon = stages * eps * eps;
    const ExactDPResult dp = exact_tree_dp(eps, stages, drift, vol, payoff, horizon, x0);

    CrrSpec crr;
    crr.steps = stages;
    crr.s0 = x0;
    crr.up = 1.0 + r * eps * eps + sigma * eps;
    crr.down = 1.0 + r * eps * eps - sigma * eps;
    crr.prob_up = 0.5;
    crr.discount_per_step = std::exp(-r * eps * eps);
    crr.payoff = [strike](double s) { return std::max(strike - s, 0.0); };
    const double ref = crr_american(crr);

    add("envelope_residual", dp.max_residual <= 1e-12,
        fmt("max residual %.3e", dp.max_residual, 0));
    add("envelope_vs_binomial", std::abs(dp.value - ref) <= 1e-12,
        fmt("tree %.12f vs binomial %.12f", dp.value, ref));
  }

  // Exact-covariance sampler: terminal variance over a small ensemble.
  {
    const double hurst = 0.7;
    const std::vector<double> times{0.25, 0.5, 0.75, 1.0};
    const std::size_t n = 4000;
    double s1 = 0.0, s2 = 0.0;
    RngStream rng(opt.seed, stream_domain::kOracle + (1ull << 21));
    for (std::size_t i = 0; i < n; ++i) {
      const auto path = fbm_exact(hurst, times, rng);
      s1 += path.back();
      s2 += path.back() * path.back();
    }
    const double var = s2 / n - (s1 / n) * (s1 / n);
    add("exact_cov_terminal_variance", std::abs(var - 1.0) < 0.10,
        fmt("Var %.4f vs 1 (tol 0.10)", var, 0));
  }

  // Rate-function transform at the midpoint.
  {
    const double v = legendre_i_star(0.5);
    add("rate_function_midpoint", std::abs(v - 0.327) < 5e-3,
        fmt("I(0.5) = %.5f vs 0.327", v, 0));
  }

  return rep;
}

}  // namespace skelstop
