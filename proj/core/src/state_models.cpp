#include "skelstop/state_models.hpp"

#include <stdexcept>

namespace skelstop {

StatePath euler_path(const Skeleton& s, const PathFunctional& drift,
                     const PathFunctional& vol, double x0) {
  if (s.dim != 1) throw std::domain_error("euler_path: skeleton must be dim 1");
  const std::size_t e = s.steps();
  StatePath x;
  x.times.resize(e + 1);
  x.values.resize(e + 1);
  x.times[0] = 0.0;
  x.values[0] = x0;
  const auto& walk = s.walks[0];
  for (std::size_t n = 1; n <= e; ++n) {
    const double t_prev = x.times[n - 1];
    const PathView sofar(x.times.data(), x.values.data(), n - 1);
    const double a = drift(t_prev, sofar);
    const double b = vol(t_prev, sofar);
    x.times[n] = s.times[n - 1];
    x.values[n] = x.values[n - 1] + a * s.deltas[n - 1] + b * (walk[n] - walk[n - 1]);
  }
  return x;
}

StatePath drifted_fbm_path(const Skeleton& s, const FbmParams& p,
                           const PathFunctional& drift, double x0) {
  if (s.dim != 1) throw std::domain_error("drifted_fbm_path: skeleton must be dim 1");
  const std::size_t e = s.steps();
  const FbmDriver d = driver_from_skeleton(p, s, e);
  StatePath x;
  x.times.resize(e + 1);
  x.values.resize(e + 1);
  x.times[0] = 0.0;
  x.values[0] = x0;
  for (std::size_t n = 1; n <= e; ++n) {
    const double t_prev = x.times[n - 1];
    const PathView sofar(x.times.data(), x.values.data(), n - 1);
    const double a = drift(t_prev, sofar);
    x.times[n] = s.times[n - 1];
    x.values[n] =
        x.values[n - 1] + a * s.deltas[n - 1] + (d.grid_values[n] - d.grid_values[n - 1]);
  }
  return x;
}

RewardPath reward_path(const StatePath& x, const PathFunctional& reward, double horizon) {
  if (!(horizon > 0.0)) throw std::domain_error("reward_path: horizon must be > 0");
  const std::size_t e = x.stages();
  RewardPath z;
  z.values.resize(e + 1);
  // Last in-horizon stage; t_0 = 0 is always in horizon.
  std::size_t j = 0;
  for (std::size_t n = e; n > 0; --n)
    if (x.times[n] <= horizon) { j = n; break; }
  for (std::size_t n = 0; n <= j; ++n) {
    const PathView prefix(x.times.data(), x.values.data(), n);
    z.values[n] = reward(x.times[n], prefix);
  }
  for (std::size_t n = j + 1; n <= e; ++n) z.values[n] = z.values[j];
  if (j < e) z.frozen_from = j + 1;
  return z;
}

}  // namespace skelstop
