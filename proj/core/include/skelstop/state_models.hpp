#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "skelstop/fbm_kernel.hpp"
#include "skelstop/functionals.hpp"
#include "skelstop/skeleton.hpp"

namespace skelstop {

// State observed on the skeleton grid; values[n] = X(T_n), values[0] = x0.
struct StatePath {
  std::vector<double> times;   // grid times including 0
  std::vector<double> values;  // same length
  std::size_t stages() const { return times.empty() ? 0 : times.size() - 1; }
};

// Explicit Euler step on the random grid, coefficients frozen at the
// left endpoint and fed the path available up to it:
//   X(T_n) = X(T_{n-1}) + drift(T_{n-1}, X)*dT_n + vol(T_{n-1}, X)*dA_n
// Requires a dim-1 skeleton (dA = walk increment).
StatePath euler_path(const Skeleton& s, const PathFunctional& drift,
                     const PathFunctional& vol, double x0);

// Same grid, fractional driving noise:
//   Y(T_n) = Y(T_{n-1}) + drift(T_{n-1}, Y)*dT_n + (B_H(T_n) - B_H(T_{n-1}))
// with B_H the fractional driver built from the same skeleton.
StatePath drifted_fbm_path(const Skeleton& s, const FbmParams& p,
                           const PathFunctional& drift, double x0);

// Reward along a state path, frozen at the horizon: with j the last
// stage whose grid time is <= horizon, values[n] = F(t_n, path prefix)
// for n <= j and values[n] = values[j] for n > j.  frozen_from = j+1
// when freezing occurred.
struct RewardPath {
  std::vector<double> values;
  std::optional<std::size_t> frozen_from;
};

RewardPath reward_path(const StatePath& x, const PathFunctional& reward, double horizon);

}  // namespace skelstop
