#include "skelstop/fbm_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skelstop {
namespace {

// inner(t, s) = integral_s^t u^(H-1/2) (u-s)^(H-3/2) du, without the
// s^(1/2-H) prefactor or norm_const.
//
// Split at u = 2s.  On [s, min(2s,t)] substitute u = s + (m-s)v and use
// the Gauss-Jacobi rule with weight v^(H-3/2); the remaining factor is
// analytic because u stays within a factor 2 of s.  On [2s, t]
// substitute w = log(u-s); the integrand becomes smooth and slowly
// varying, handled by Gauss-Legendre panels of log-length <= 6.
double inner_integral(const FbmParams& p, double t, double s) {
  const double h = p.hurst;
  const double hm = h - 0.5;
  double total = 0.0;

  const double mid = std::min(t, 2.0 * s);
  {
    const double len = mid - s;
    if (len > 0.0) {
      double acc = 0.0;
      for (std::size_t i = 0; i < p.jacobi.nodes.size(); ++i)
        acc += p.jacobi.weights[i] * std::pow(s + len * p.jacobi.nodes[i], hm);
      total += std::pow(len, hm) * acc;
    }
  }
  if (mid < t) {
    // integral over w in [log s, log(t-s)] of (s + e^w)^(H-1/2) e^(w(H-1/2))
    const double wlo = std::log(s);
    const double whi = std::log(t - s);
    const int panels = std::max(1, static_cast<int>(std::ceil((whi - wlo) / 6.0)));
    const double pw = (whi - wlo) / panels;
    double acc = 0.0;
    for (int q = 0; q < panels; ++q) {
      const double a = wlo + q * pw;
      for (std::size_t i = 0; i < p.legendre.nodes.size(); ++i) {
        const double w = a + pw * p.legendre.nodes[i];
        const double ew = std::exp(w);
        acc += pw * p.legendre.weights[i] * std::pow(s + ew, hm) * std::exp(w * hm);
      }
    }
    total += acc;
  }
  return total;
}

double raw_kernel(const FbmParams& p, double t, double s) {
  if (!(s > 0.0) || !(s <= t)) throw std::domain_error("kernel_K: need 0 < s <= t");
  if (s == t) return 0.0;
  return std::pow(s, 0.5 - p.hurst) * inner_integral(p, t, s);
}

// Double-exponential rule on (0,1); absorbs algebraic endpoint
// singularities.  Used only for the one-off calibration integral.
template <class F>
double integrate_de01(F f) {
  const double half_pi = 1.5707963267948966;
  double prev = 0.0;
  for (int level = 2; level <= 10; ++level) {
    const double hstep = 1.0 / static_cast<double>(1 << level);
    // The window must cover the slowly decaying side of near-endpoint
    // power singularities (summand ~ x^(2H-1) as tau -> -infinity); 6.0
    // reaches underflow, where the x <= 0 guard takes over.
    const int kmax = static_cast<int>(6.0 / hstep);
    double sum = 0.0;
    for (int k = -kmax; k <= kmax; ++k) {
      const double tau = k * hstep;
      const double z = half_pi * std::sinh(tau);
      // x = (1 + tanh z)/2, written to keep both x and 1-x accurate.
      const double x = 1.0 / (1.0 + std::exp(-2.0 * z));
      const double one_minus_x = 1.0 / (1.0 + std::exp(2.0 * z));
      if (x <= 0.0 || one_minus_x <= 0.0) continue;
      const double jac = half_pi * std::cosh(tau) * 2.0 * x * one_minus_x;
      if (jac < 1e-300) continue;
      sum += jac * f(x, one_minus_x);
    }
    sum *= hstep;
    if (level > 4 && std::abs(sum - prev) <= 1e-13 * std::abs(sum)) return sum;
    prev = sum;
  }
  return prev;
}

}  // namespace

double calibrate_norm_const(const FbmParams& p) {
  const double mass = integrate_de01([&](double s, double) {
    const double g = raw_kernel(p, 1.0, s);
    return g * g;
  });
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw std::runtime_error("calibrate_norm_const: calibration integral failed");
  return 1.0 / std::sqrt(mass);
}

FbmParams make_fbm_params(double hurst, int quad_order) {
  if (!(hurst > 0.5) || !(hurst < 1.0))
    throw std::domain_error("make_fbm_params: hurst must lie in (0.5, 1)");
  if (quad_order < 4) throw std::domain_error("make_fbm_params: quad_order must be >= 4");
  FbmParams p;
  p.hurst = hurst;
  p.quad_order = quad_order;
  p.jacobi = gauss_jacobi01(quad_order, 0.0, hurst - 1.5);
  p.legendre = gauss_legendre01(std::max(8, quad_order / 2));
  p.norm_const = 1.0;
  p.norm_const = calibrate_norm_const(p);
  return p;
}

double kernel_K(const FbmParams& p, double t, double s) {
  return p.norm_const * raw_kernel(p, t, s);
}

namespace {

// integral_a^b u^(H-1/2) (u-s)^(H-3/2) du for s < a < b: one grid panel
// of an already-started column.  In w = log(u-s) the integrand is
// (s+e^w)^(H-1/2) e^(w(H-1/2)), smooth and near-exponential, so a short
// fixed Gauss-Legendre rule per w-subpanel of length <= 4 suffices.
double column_panel(double hm, double s, double a, double b) {
  static const QuadRule gl4 = gauss_legendre01(4);
  static const QuadRule gl8 = gauss_legendre01(8);
  const double wlo = std::log(a - s);
  const double whi = std::log(b - s);
  const double len = whi - wlo;
  const QuadRule& rule = len < 0.35 ? gl4 : gl8;
  const int panels = std::max(1, static_cast<int>(std::ceil(len / 4.0)));
  const double pw = len / panels;
  double acc = 0.0;
  for (int q = 0; q < panels; ++q) {
    const double base = wlo + q * pw;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double w = base + pw * rule.nodes[i];
      const double ew = std::exp(w);
      acc += pw * rule.weights[i] * std::pow(s + ew, hm) * std::exp(w * hm);
    }
  }
  return acc;
}

}  // namespace

FbmDriver driver_from_skeleton(const FbmParams& p, const Skeleton& s, std::size_t upto) {
  if (s.dim != 1) throw std::domain_error("driver_from_skeleton: skeleton must be dim 1");
  if (upto > s.steps()) throw std::domain_error("driver_from_skeleton: upto exceeds steps");
  FbmDriver d;
  d.grid_values.assign(upto + 1, 0.0);
  if (upto < 2) return d;
  const auto& walk = s.walks[0];
  const double hm = p.hurst - 0.5;

  // Summed-by-parts form B(T_m) = -sum_n dA_n K(T_m, T_n) with
  // K(T_m, T_n) = norm * T_n^(1/2-H) * J_n(T_m), where the column
  // integrals J_n(T_m) = integral_{T_n}^{T_m} u^(H-1/2)(u-T_n)^(H-3/2) du
  // grow by one smooth grid panel per step.  Only a column's first
  // panel touches the u = T_n singularity and needs the weighted rule.
  std::vector<double> coef(upto), J(upto, 0.0);
  for (std::size_t m = 2; m <= upto; ++m) {
    const double a = s.times[m - 2];
    const double b = s.times[m - 1];
    for (std::size_t n = 1; n + 1 < m; ++n) J[n] += column_panel(hm, s.times[n - 1], a, b);
    J[m - 1] = inner_integral(p, b, a);
    coef[m - 1] = (walk[m - 1] - walk[m - 2]) * std::pow(a, 0.5 - p.hurst);
    double acc = 0.0;
    for (std::size_t n = 1; n < m; ++n) acc += coef[n] * J[n];
    d.grid_values[m] = -p.norm_const * acc;
  }
  return d;
}

double driver_value_at(const FbmParams& p, const Skeleton& s, std::size_t m) {
  if (s.dim != 1) throw std::domain_error("driver_value_at: skeleton must be dim 1");
  if (m > s.steps()) throw std::domain_error("driver_value_at: m exceeds steps");
  if (m < 2) return 0.0;
  const double t = s.times[m - 1];
  const auto& walk = s.walks[0];
  double acc = 0.0;
  for (std::size_t n = 1; n < m; ++n)
    acc -= (walk[n] - walk[n - 1]) * kernel_K(p, t, s.times[n - 1]);
  return acc;
}

}  // namespace skelstop
