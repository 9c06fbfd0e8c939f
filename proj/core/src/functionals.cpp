#include "skelstop/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skelstop {
namespace {

double param_at(const FunctionalSpec& s, std::size_t i, const char* what) {
  if (i >= s.params.size())
    throw std::invalid_argument(std::string(what) + ": functional '" + s.name +
                                "' is missing parameter " + std::to_string(i));
  return s.params[i];
}

double param_or(const FunctionalSpec& s, std::size_t i, double fallback) {
  return i < s.params.size() ? s.params[i] : fallback;
}

}  // namespace

PathFunctional make_coefficient(const FunctionalSpec& spec) {
  if (spec.name == "zero") {
    return [](double, const PathView&) { return 0.0; };
  }
  if (spec.name == "const") {
    const double c = param_at(spec, 0, "make_coefficient");
    return [c](double, const PathView&) { return c; };
  }
  if (spec.name == "linear_state") {
    const double a = param_at(spec, 0, "make_coefficient");
    return [a](double, const PathView& w) { return a * w.last_value(); };
  }
  if (spec.name == "linear_drift") {
    const double a = param_or(spec, 0, 1.0);
    return [a](double, const PathView& w) { return a * w.last_value(); };
  }
  if (spec.name == "clip_linear") {
    const double a = param_at(spec, 0, "make_coefficient");
    const double lo = param_at(spec, 1, "make_coefficient");
    const double hi = param_at(spec, 2, "make_coefficient");
    if (!(lo <= hi)) throw std::invalid_argument("make_coefficient: clip_linear needs lo <= hi");
    return [a, lo, hi](double, const PathView& w) {
      return std::clamp(a * w.last_value(), lo, hi);
    };
  }
  throw std::invalid_argument("make_coefficient: unknown name '" + spec.name + "'");
}

PathFunctional make_payoff(const FunctionalSpec& spec) {
  if (spec.name == "put") {
    const double strike = param_at(spec, 0, "make_payoff");
    const double rate = param_or(spec, 1, 0.0);
    return [strike, rate](double t, const PathView& w) {
      return std::exp(-rate * t) * std::max(strike - w.last_value(), 0.0);
    };
  }
  if (spec.name == "call") {
    const double strike = param_at(spec, 0, "make_payoff");
    const double rate = param_or(spec, 1, 0.0);
    return [strike, rate](double t, const PathView& w) {
      return std::exp(-rate * t) * std::max(w.last_value() - strike, 0.0);
    };
  }
  if (spec.name == "lookback_max") {
    const double rate = param_or(spec, 0, 0.0);
    return [rate](double t, const PathView& w) {
      return std::exp(-rate * t) * (w.max_value() - w.last_value());
    };
  }
  if (spec.name == "identity") {
    return [](double, const PathView& w) { return w.last_value(); };
  }
  if (spec.name == "constant") {
    const double c = param_at(spec, 0, "make_payoff");
    return [c](double, const PathView&) { return c; };
  }
  throw std::invalid_argument("make_payoff: unknown name '" + spec.name + "'");
}

}  // namespace skelstop
