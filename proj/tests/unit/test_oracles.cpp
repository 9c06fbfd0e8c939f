#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "skelstop/oracles.hpp"
#include "skelstop/rng.hpp"

using namespace skelstop;

TEST_SUITE("oracles") {

TEST_CASE("degenerate binomial tree collapses to the intrinsic value") {
  CrrSpec spec;
  spec.steps = 5;
  spec.s0 = 0.5;
  spec.up = 1.0;
  spec.down = 1.0;
  spec.prob_up = 0.5;
  spec.discount_per_step = 1.0;
  spec.payoff = [](double s) { return std::max(1.0 - s, 0.0); };
  CHECK(crr_american(spec) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("american dominates european on the same tree") {
  CrrSpec spec;
  spec.steps = 64;
  spec.s0 = 1.0;
  const double r = 0.06, sigma = 0.4, dt = 1.0 / 64;
  spec.up = std::exp(sigma * std::sqrt(dt));
  spec.down = 1.0 / spec.up;
  spec.prob_up = (std::exp(r * dt) - spec.down) / (spec.up - spec.down);
  spec.discount_per_step = std::exp(-r * dt);
  spec.payoff = [](double s) { return std::max(1.0 - s, 0.0); };
  const double amer = crr_american(spec);
  // European value by direct binomial expectation.
  double eur = 0.0;
  double logc = 0.0;  // log C(64, k) built incrementally
  for (int k = 0; k <= 64; ++k) {
    if (k > 0) logc += std::log((64.0 - k + 1) / k);
    const double s = spec.s0 * std::pow(spec.up, k) * std::pow(spec.down, 64 - k);
    const double w = std::exp(logc + k * std::log(spec.prob_up) +
                              (64 - k) * std::log(1.0 - spec.prob_up));
    eur += w * spec.payoff(s);
  }
  eur *= std::pow(spec.discount_per_step, 64);
  CHECK(amer >= eur - 1e-12);
  CHECK(amer > eur + 1e-4);  // genuine early-exercise premium at these params
}

TEST_CASE("three-step tree value equals exhaustive nodal-policy search") {
  CrrSpec spec;
  spec.steps = 3;
  spec.s0 = 1.0;
  spec.up = 1.25;
  spec.down = 0.85;
  spec.prob_up = 0.45;
  spec.discount_per_step = 0.98;
  spec.payoff = [](double s) { return std::max(1.1 - s, 0.0); };

  // Recombining node (j, k): k up-moves after j steps.  A nodal policy
  // assigns stop/continue to the 6 interior nodes (levels 0..2); level 3
  // always stops.  2^6 policies, each valued by forward induction.
  auto node_spot = [&](int j, int k) {
    return spec.s0 * std::pow(spec.up, k) * std::pow(spec.down, j - k);
  };
  double best = -1.0;
  for (int mask = 0; mask < 64; ++mask) {
    auto stop_bit = [&](int j, int k) {
      const int flat = j * (j + 1) / 2 + k;  // 0, 1..2, 3..5
      return (mask >> flat) & 1;
    };
    // prob[k] of being alive (not yet stopped) at node (j, k).
    std::vector<double> alive = {1.0};
    double value = 0.0;
    for (int j = 0; j <= 3; ++j) {
      std::vector<double> next(j + 2, 0.0);
      for (int k = 0; k <= j; ++k) {
        if (alive[k] == 0.0) continue;
        const bool stop = (j == 3) || stop_bit(j, k);
        if (stop) {
          value += alive[k] * std::pow(spec.discount_per_step, j) *
                   spec.payoff(node_spot(j, k));
        } else {
          next[k + 1] += alive[k] * spec.prob_up;
          next[k] += alive[k] * (1.0 - spec.prob_up);
        }
      }
      alive = std::move(next);
    }
    best = std::max(best, value);
  }
  CHECK(crr_american(spec) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("exact fractional sample has the advertised covariance") {
  // Marginal checks first: cov(t,t) = t^2H.
  const double hurst = 0.6;
  const std::vector<double> times = {0.5, 1.0};
  const int n = 20000;
  double c00 = 0.0, c11 = 0.0, c01 = 0.0;
  RngStream rng(91, 1);
  for (int i = 0; i < n; ++i) {
    std::vector<double> b = fbm_exact(hurst, times, rng);
    c00 += b[0] * b[0];
    c11 += b[1] * b[1];
    c01 += b[0] * b[1];
  }
  c00 /= n; c11 /= n; c01 /= n;
  const double h2 = 2.0 * hurst;
  const double want01 =
      0.5 * (std::pow(0.5, h2) + 1.0 - std::pow(0.5, h2));
  // SE of c01 ~ sqrt(Var(b0 b1)/n); Var ~ c00*c11 + c01^2 ~ 0.66 -> SE ~ 0.006.
  CHECK(std::fabs(c01 - want01) < 3.0 * 0.006);
  CHECK(c00 == doctest::Approx(std::pow(0.5, h2)).epsilon(0.05));
  CHECK(c11 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("hurst one-half degenerates to Brownian covariance") {
  const std::vector<double> times = {0.25, 0.5, 1.0};
  RngStream rng(91, 2);
  const int n = 20000;
  std::vector<double> acc(3, 0.0);
  for (int i = 0; i < n; ++i) {
    std::vector<double> b = fbm_exact(0.5, times, rng);
    acc[0] += b[0] * b[0];
    acc[1] += b[0] * b[2];   // min(0.25, 1.0)
    acc[2] += (b[2] - b[1]) * b[0];  // independent increments -> 0
  }
  CHECK(acc[0] / n == doctest::Approx(0.25).epsilon(0.05));
  CHECK(acc[1] / n == doctest::Approx(0.25).epsilon(0.06));
  CHECK(std::fabs(acc[2] / n) < 0.015);
}

TEST_CASE("fractional sampler validates its arguments") {
  RngStream rng(91, 3);
  CHECK_THROWS_AS(fbm_exact(1.2, {0.5, 1.0}, rng), std::domain_error);
  CHECK_THROWS_AS(fbm_exact(0.7, {0.5, 0.25}, rng), std::domain_error);
  CHECK_THROWS_AS(fbm_exact(0.7, {0.0, 0.5}, rng), std::domain_error);
}

TEST_CASE("rate function matches a grid-search oracle") {
  // I(x) = sup_{l<0} [l x + log cosh(sqrt(2|l|))] computed by brute
  // force on a fine lambda grid with local refinement.
  auto objective = [](double lam, double x) {
    const double s = std::sqrt(-2.0 * lam);
    const double logcosh = s + std::log1p(std::exp(-2.0 * s)) - std::log(2.0);
    return lam * x + logcosh;
  };
  for (double x : {0.15, 0.35, 0.5, 0.75, 0.9}) {
    double best = 0.0, bestl = -1e-8;
    for (int i = 1; i <= 400000; ++i) {
      const double lam = -2e-4 * i;  // covers (-80, 0)
      const double v = objective(lam, x);
      if (v > best) { best = v; bestl = lam; }
    }
    for (int r = 0; r < 3; ++r) {  // refine around the best point
      const double w = 2e-4 * std::pow(10.0, -r);
      const double c = bestl;
      for (int i = -200; i <= 200; ++i) {
        const double lam = std::min(c + i * w / 200.0, -1e-12);
        const double v = objective(lam, x);
        if (v > best) { best = v; bestl = lam; }
      }
    }
    CHECK(legendre_i_star(x) == doctest::Approx(best).epsilon(1e-6));
  }
}

TEST_CASE("rate function is decreasing and vanishes at the mean") {
  double prev = legendre_i_star(0.05);
  for (double x : {0.2, 0.4, 0.6, 0.8, 0.95}) {
    const double v = legendre_i_star(x);
    CHECK(v < prev);
    CHECK(v > 0.0);
    prev = v;
  }
  CHECK(legendre_i_star(0.999) < 2e-5);
  CHECK_THROWS_AS(legendre_i_star(0.0), std::domain_error);
  CHECK_THROWS_AS(legendre_i_star(1.0), std::domain_error);
  CHECK_THROWS_AS(legendre_i_star(-0.5), std::domain_error);
}

TEST_CASE("skeleton extraction from a monotone ramp crosses at exact indices") {
  // values[i] = i * 0.001: the first index with value >= eps = 0.25 is
  // 250, the next crossing (relative to 0.25) is 500, and so on.
  std::vector<double> ramp(2001);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.001 * static_cast<double>(i);
  Skeleton s = coupled_skeleton_from_fine_path(ramp, 0.01, 0.25, 0);
  REQUIRE(s.steps() == 8);
  for (std::size_t n = 0; n < 8; ++n) {
    CHECK(s.signs[n] == 1);
    CHECK(s.times[n] == doctest::Approx(0.01 * 250.0 * (n + 1)).epsilon(1e-12));
    CHECK(s.walks[0][n + 1] == doctest::Approx(0.25 * (n + 1)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(coupled_skeleton_from_fine_path(ramp, 0.01, 0.25, 9), std::runtime_error);
}

TEST_CASE("skeleton extraction matches the exit-time law on Brownian data") {
  // Fine Brownian paths at dt = 1e-5; the inter-event deltas must have
  // mean close to eps^2 (discrete crossings overshoot by O(sqrt(dt))).
  const double dt = 1e-5, eps = 0.125;
  const int fine_n = 100000;
  RngStream rng(91, 4);
  double sum = 0.0;
  int count = 0;
  int sign_sum = 0;
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<double> path(fine_n + 1, 0.0);
    const double sdt = std::sqrt(dt);
    for (int i = 1; i <= fine_n; ++i) path[i] = path[i - 1] + sdt * rng.next_normal();
    Skeleton s = coupled_skeleton_from_fine_path(path, dt, eps, 0);
    for (std::size_t n = 0; n < s.steps(); ++n) {
      sum += s.deltas[n];
      ++count;
      sign_sum += s.signs[n];
      // Sign agrees with the displacement since the previous event.
      const double move = s.walks[0][n + 1] - s.walks[0][n];
      CHECK(move == doctest::Approx(eps * s.signs[n]).epsilon(1e-12));
    }
  }
  REQUIRE(count > 1500);
  CHECK(sum / count == doctest::Approx(eps * eps).epsilon(0.02));
  CHECK(std::fabs(static_cast<double>(sign_sum)) / count < 0.1);
}

}  // TEST_SUITE
