#pragma once

#include "skelstop/rng.hpp"

namespace skelstop {

// Law of tau = inf{ t > 0 : |B(t)| = 1 } for a standard Brownian
// motion started at 0.  E[tau] = 1, E[exp(lambda*tau)] =
// sech(sqrt(2|lambda|)) for lambda <= 0.
//
// Density and CDF are evaluated from two alternating series: a
// reflection (image) series accurate for small t and a spectral series
// accurate for large t, switched at t = 0.64 where both converge fast.
// Terms below 1e-12 in absolute value are dropped.

double exit_time_pdf(double t);
double exit_time_cdf(double t);

// Inverse CDF.  u must lie in (0,1).  Solved by bisection plus Newton
// polish to 1e-10; throws std::runtime_error if the iteration cap is
// exceeded (which signals a sampler defect, not bad luck).
double exit_time_quantile(double u);

// One draw of tau by CDF inversion; rejection-free.
double sample_unit_exit_time(RngStream& rng);

// E[exp(lambda*tau)] for lambda <= 0; throws std::domain_error for
// lambda > 0 (the transform diverges past a positive threshold).
double exit_mgf(double lambda);

}  // namespace skelstop
