#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace skelstop {

// Read-only view of a piecewise-constant cadlag path observed at grid
// times times[0..n] (times[0] = 0).  A functional evaluated at stage n
// receives exactly this prefix, so it cannot read past its argument
// time: non-anticipativity holds by construction.
class PathView {
 public:
  PathView(const double* times, const double* values, std::size_t n)
      : times_(times), values_(values), n_(n) {}

  std::size_t stages() const { return n_; }
  double time_at(std::size_t i) const { return times_[i]; }
  double value_at(std::size_t i) const { return values_[i]; }
  double last_time() const { return times_[n_]; }
  double last_value() const { return values_[n_]; }

  // Value at time u: last grid value with grid time <= u.
  double query(double u) const {
    std::size_t lo = 0;
    for (std::size_t i = n_; i > 0; --i)
      if (times_[i] <= u) { lo = i; break; }
    return values_[lo];
  }

  double max_value() const {
    double m = values_[0];
    for (std::size_t i = 1; i <= n_; ++i)
      if (values_[i] > m) m = values_[i];
    return m;
  }

 private:
  const double* times_;
  const double* values_;
  std::size_t n_;
};

// Non-anticipative functional: f(t, path-up-to-t).
using PathFunctional = std::function<double(double, const PathView&)>;

// Named functional with numeric parameters, the unit of configuration
// for drift, volatility and reward.
struct FunctionalSpec {
  std::string name;
  std::vector<double> params;
};

// Coefficient registry (drift / volatility):
//   zero                       -> 0
//   const(c)                   -> c
//   linear_state(a)            -> a * w(t)
//   clip_linear(a, lo, hi)     -> clamp(a * w(t), lo, hi)
// linear_drift is an alias of linear_state(1).
PathFunctional make_coefficient(const FunctionalSpec& spec);

// Reward registry:
//   put(strike, rate)          -> exp(-rate*t) * max(strike - w(t), 0)
//   call(strike, rate)         -> exp(-rate*t) * max(w(t) - strike, 0)
//   lookback_max(rate)         -> exp(-rate*t) * (max_{u<=t} w(u) - w(t))
//   identity                   -> w(t)
//   constant(c)                -> c
PathFunctional make_payoff(const FunctionalSpec& spec);

}  // namespace skelstop
