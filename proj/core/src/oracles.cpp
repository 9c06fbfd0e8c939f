#include "skelstop/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skelstop {

double crr_american(const CrrSpec& spec) {
  if (spec.steps < 1) throw std::domain_error("crr_american: steps must be >= 1");
  if (!(spec.prob_up > 0.0) || !(spec.prob_up < 1.0))
    throw std::domain_error("crr_american: prob_up must lie in (0,1)");
  if (!spec.payoff) throw std::invalid_argument("crr_american: payoff missing");

  const int n = spec.steps;
  std::vector<double> spot(static_cast<std::size_t>(n) + 1);
  std::vector<double> val(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    // i up-moves, n-i down-moves.
    spot[static_cast<std::size_t>(i)] =
        spec.s0 * std::pow(spec.up, i) * std::pow(spec.down, n - i);
    val[static_cast<std::size_t>(i)] = spec.payoff(spot[static_cast<std::size_t>(i)]);
  }
  const double p = spec.prob_up;
  const double q = 1.0 - p;
  const double disc = spec.discount_per_step;
  for (int step = n - 1; step >= 0; --step) {
    for (int i = 0; i <= step; ++i) {
      const double cont =
          disc * (p * val[static_cast<std::size_t>(i) + 1] + q * val[static_cast<std::size_t>(i)]);
      const double s =
          spec.s0 * std::pow(spec.up, i) * std::pow(spec.down, step - i);
      val[static_cast<std::size_t>(i)] = std::max(spec.payoff(s), cont);
    }
  }
  return val[0];
}

std::vector<double> fbm_exact(double hurst, const std::vector<double>& times, RngStream& rng) {
  if (!(hurst > 0.0) || !(hurst < 1.0))
    throw std::domain_error("fbm_exact: hurst must lie in (0,1)");
  const std::size_t n = times.size();
  if (n == 0) return {};
  for (std::size_t i = 0; i < n; ++i) {
    if (!(times[i] > 0.0)) throw std::domain_error("fbm_exact: times must be > 0");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw std::domain_error("fbm_exact: times must be strictly increasing");
  }

  Eigen::MatrixXd cov(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double h2 = 2.0 * hurst;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double c = 0.5 * (std::pow(times[i], h2) + std::pow(times[j], h2) -
                              std::pow(times[i] - times[j], h2));
      cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c;
      cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = c;
    }

  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    const double jitter = 1e-12 * cov.diagonal().maxCoeff();
    cov.diagonal().array() += jitter;
    llt.compute(cov);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("fbm_exact: covariance not positive definite after jitter");
  }

  Eigen::VectorXd g(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) g(static_cast<Eigen::Index>(i)) = rng.next_normal();
  const Eigen::VectorXd v = llt.matrixL() * g;
  return std::vector<double>(v.data(), v.data() + n);
}

double legendre_i_star(double x) {
  if (!(x > 0.0) || !(x < 1.0)) throw std::domain_error("legendre_i_star: x must lie in (0,1)");
  // Maximize phi(mu) = -mu*x + log cosh(sqrt(2 mu)) over mu > 0.
  const auto phi = [x](double mu) {
    const double s = std::sqrt(2.0 * mu);
    // log cosh without overflow.
    const double lc = s + std::log1p(std::exp(-2.0 * s)) - std::log(2.0);
    return -mu * x + lc;
  };
  // phi'(mu) = -x + tanh(s)/s, decreasing; the optimum satisfies
  // tanh(s)/s = x, and for x -> 0 sits near s = 1/x.
  double lo = 0.0;
  double hi = std::max(8.0, 2.0 / (x * x));
  // Golden-section bracket.
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  for (int it = 0; it < 80; ++it) {
    if (phi(c) > phi(d)) b = d; else a = c;
    c = b - gr * (b - a);
    d = a + gr * (b - a);
  }
  double mu = 0.5 * (a + b);
  // Newton polish on phi'.
  for (int it = 0; it < 60; ++it) {
    const double s = std::sqrt(2.0 * mu);
    const double th = std::tanh(s);
    const double d1 = -x + th / s;
    const double sech2 = 1.0 - th * th;
    // d/dmu [tanh(s)/s] with ds/dmu = 1/s.
    const double d2 = (s * sech2 - th) / (s * s * s);
    if (std::abs(d2) < 1e-300) break;
    const double next = mu - d1 / d2;
    if (!(next > 0.0)) break;
    if (std::abs(next - mu) <= 1e-8 * (1.0 + mu)) { mu = next; break; }
    mu = next;
  }
  return phi(mu);
}

Skeleton coupled_skeleton_from_fine_path(const std::vector<double>& values, double dt,
                                         double eps, std::size_t steps) {
  if (!(dt > 0.0)) throw std::domain_error("coupled_skeleton_from_fine_path: dt must be > 0");
  if (!(eps > 0.0)) throw std::domain_error("coupled_skeleton_from_fine_path: eps must be > 0");
  if (values.size() < 2)
    throw std::invalid_argument("coupled_skeleton_from_fine_path: path too short");

  Skeleton s;
  s.eps = eps;
  s.dim = 1;
  std::vector<double> walk{0.0};
  double ref = values[0];
  double prev_time = 0.0;
  long long level = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double move = values[i] - ref;
    if (std::abs(move) >= eps) {
      const double t = static_cast<double>(i) * dt;
      const int sign = move > 0.0 ? 1 : -1;
      level += sign;
      s.times.push_back(t);
      s.deltas.push_back(t - prev_time);
      s.coords.push_back(0);
      s.signs.push_back(static_cast<std::int8_t>(sign));
      walk.push_back(eps * static_cast<double>(level));
      prev_time = t;
      ref = values[i];
      if (steps > 0 && s.times.size() == steps) break;
    }
  }
  if (steps > 0 && s.times.size() < steps)
    throw std::runtime_error("coupled_skeleton_from_fine_path: path exhausted before steps");
  s.walks.assign(1, std::move(walk));
  return s;
}

}  // namespace skelstop
