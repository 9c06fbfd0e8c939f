#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "skelstop/exit_time.hpp"
#include "skelstop/rng.hpp"
#include "skelstop/skeleton.hpp"

namespace skelstop {

// Binomial-tree American pricer with explicit up/down/probability and
// per-step discount; payoff maps spot to intrinsic value.  Exercise is
// allowed at every node including the root.
struct CrrSpec {
  int steps = 0;
  double s0 = 0.0;
  double up = 0.0;
  double down = 0.0;
  double prob_up = 0.5;
  double discount_per_step = 1.0;
  std::function<double(double)> payoff;
};

double crr_american(const CrrSpec& spec);

// Exact fractional Brownian sample at the given strictly increasing
// positive times, via Cholesky of the covariance
//
//   cov(s,t) = (s^2H + t^2H - |t-s|^2H) / 2.
//
// On factorization failure a jitter of 1e-12 * max diagonal is added
// once; a second failure throws.
std::vector<double> fbm_exact(double hurst, const std::vector<double>& times, RngStream& rng);

// Legendre transform of the exit-time log-MGF:
//   I(x) = sup_{lambda < 0} [ lambda x - log sech(sqrt(2|lambda|)) ],
// finite and decreasing on (0,1).  Golden-section bracket plus Newton
// polish to 1e-8.
double legendre_i_star(double x);

// Extracts the skeleton of a Brownian path sampled on a uniform fine
// grid (values[i] at time i*dt): an event fires at the first grid index
// where the path has moved >= eps from the previous event's value (the
// discrete crossing overshoots by O(sqrt(dt))).  steps > 0 demands that
// many events and throws if the path is exhausted first; steps == 0
// returns every event found.
Skeleton coupled_skeleton_from_fine_path(const std::vector<double>& values, double dt,
                                         double eps, std::size_t steps = 0);

}  // namespace skelstop
