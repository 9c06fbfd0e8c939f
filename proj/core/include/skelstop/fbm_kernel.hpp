#pragma once

#include <cstddef>
#include <vector>

#include "skelstop/gauss_quad.hpp"
#include "skelstop/skeleton.hpp"

namespace skelstop {

// Volterra kernel of fractional Brownian motion for hurst in (1/2, 1):
//   K(t,s) = norm_const * s^(1/2-H) * integral_s^t u^(H-1/2) (u-s)^(H-3/2) du
// norm_const is calibrated so that integral_0^1 K(1,s)^2 ds = 1, which
// pins unit variance at t = 1 for the induced process.
struct FbmParams {
  double hurst = 0.75;
  int quad_order = 32;
  double norm_const = 0.0;
  // Cached rules; fixed once per (hurst, quad_order), read-only afterwards.
  QuadRule jacobi;    // weight v^(H-3/2) on [0,1]
  QuadRule legendre;  // log-substitution panels away from the u = s endpoint
};

// Builds rules and calibrates norm_const.  quad_order is the node count
// of the singular-endpoint rule; 32 gives ~1e-10 relative kernel accuracy.
FbmParams make_fbm_params(double hurst, int quad_order = 32);

// Calibration integral only; ignores p.norm_const and returns the value
// it should take.  Uses double-exponential quadrature, which absorbs the
// s^(1-2H) endpoint singularity of the squared kernel.
double calibrate_norm_const(const FbmParams& p);

// K(t,s); throws std::domain_error unless 0 < s <= t.  K(t,t) = 0.
double kernel_K(const FbmParams& p, double t, double s);

// Pathwise fractional driver built from a dim-1 skeleton walk A:
//   B_H(T_m) = sum_{n<m} A(T_n) * [K(T_m, T_{n+1}) - K(T_m, T_n)]
// This is the exact integral of d/ds K(T_m, s) against the piecewise
// constant walk; the n = 0 term vanishes because A = 0 before the first
// event, which also neutralizes the s -> 0 divergence of K.
struct FbmDriver {
  std::vector<double> grid_values;  // index m = value at T_m; [0] = 0
};

// All values up to grid rank `upto` (inclusive).  Inner integrals are
// accumulated column by column: advancing the grid by one event extends
// every older column by a single smooth panel, so only the newest column
// ever needs the singular-endpoint rule.
FbmDriver driver_from_skeleton(const FbmParams& p, const Skeleton& s, std::size_t upto);

// Single value at grid rank m in O(m) kernel calls, via the summed-by-
// parts form -sum_{n=1}^{m-1} (A(T_n)-A(T_{n-1})) K(T_m, T_n).
double driver_value_at(const FbmParams& p, const Skeleton& s, std::size_t m);

}  // namespace skelstop
