#include "skelstop/exit_time.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace skelstop {
namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kSwitchTime = 0.64;  // both series converge fast here
constexpr double kTermCutoff = 1e-12;
constexpr int kMaxSeriesTerms = 64;

// Image series, sharp for t <= kSwitchTime.
// f(t) = sqrt(2/(pi t^3)) * sum_k (-1)^k (2k+1) exp(-(2k+1)^2/(2t))
double pdf_small(double t) {
  const double inv2t = 0.5 / t;
  double sum = 0.0;
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    const double m = 2.0 * k + 1.0;
    const double term = m * std::exp(-m * m * inv2t);
    sum += (k & 1) ? -term : term;
    if (term < kTermCutoff) break;
  }
  return std::sqrt(2.0 / (kPi * t * t * t)) * sum;
}

// F(t) = 2 * sum_k (-1)^k erfc((2k+1)/sqrt(2t))
double cdf_small(double t) {
  const double inv_sqrt2t = 1.0 / std::sqrt(2.0 * t);
  double sum = 0.0;
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    const double term = std::erfc((2.0 * k + 1.0) * inv_sqrt2t);
    sum += (k & 1) ? -term : term;
    if (term < kTermCutoff) break;
  }
  return 2.0 * sum;
}

// Spectral series, sharp for t >= kSwitchTime.
// f(t) = (pi/2) * sum_n (-1)^n (2n+1) exp(-(2n+1)^2 pi^2 t / 8)
double pdf_large(double t) {
  const double c = kPi * kPi * t / 8.0;
  double sum = 0.0;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    const double m = 2.0 * n + 1.0;
    const double term = m * std::exp(-m * m * c);
    sum += (n & 1) ? -term : term;
    if (term < kTermCutoff) break;
  }
  return 0.5 * kPi * sum;
}

// F(t) = 1 - (4/pi) * sum_n (-1)^n exp(-(2n+1)^2 pi^2 t / 8) / (2n+1)
double cdf_large(double t) {
  const double c = kPi * kPi * t / 8.0;
  double sum = 0.0;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    const double m = 2.0 * n + 1.0;
    const double term = std::exp(-m * m * c) / m;
    sum += (n & 1) ? -term : term;
    if (term < kTermCutoff) break;
  }
  return 1.0 - (4.0 / kPi) * sum;
}

double quantile_uncached(double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("exit_time_quantile: u outside (0,1)");
  // Bracket: F(1e-8) underflows to 0; the spectral tail gives
  // 1 - F(t) ~ (4/pi) exp(-pi^2 t / 8), so 64 covers u up to 1 - 2^-64.
  double lo = 1e-8, hi = 64.0;
  double t = 0.35;  // rough median
  for (int it = 0; it < 200; ++it) {
    const double F = exit_time_cdf(t) - u;
    if (F > 0.0) hi = t; else lo = t;
    const double f = exit_time_pdf(t);
    double step = 0.0;
    bool newton_ok = false;
    if (f > 1e-300) {
      step = -F / f;
      const double cand = t + step;
      newton_ok = cand > lo && cand < hi;
    }
    const double next = newton_ok ? t + step : 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-10 * (1.0 + std::abs(next))) return next;
    t = next;
  }
  throw std::runtime_error("exit_time_quantile: iteration cap exceeded");
}

// 1024-knot inverse-CDF table used only as a Newton warm start; the
// polish below the table keeps full accuracy.
const std::array<double, 1025>& quantile_table() {
  static const std::array<double, 1025> table = [] {
    std::array<double, 1025> q{};
    for (int i = 1; i < 1024; ++i) q[i] = quantile_uncached(i / 1024.0);
    q[0] = q[1];
    q[1024] = q[1023];
    return q;
  }();
  return table;
}

}  // namespace

double exit_time_pdf(double t) {
  if (t <= 0.0) return 0.0;
  return t <= kSwitchTime ? pdf_small(t) : pdf_large(t);
}

double exit_time_cdf(double t) {
  if (t <= 0.0) return 0.0;
  return t <= kSwitchTime ? cdf_small(t) : cdf_large(t);
}

double exit_time_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("exit_time_quantile: u outside (0,1)");
  const auto& tab = quantile_table();
  const double pos = u * 1024.0;
  const int i = std::min(1023, static_cast<int>(pos));
  const double frac = pos - i;
  double t = tab[i] * (1.0 - frac) + tab[i + 1] * frac;
  // Safeguarded Newton from the table seed.
  double lo = 1e-8, hi = 64.0;
  for (int it = 0; it < 100; ++it) {
    const double F = exit_time_cdf(t) - u;
    if (F > 0.0) hi = t; else lo = t;
    const double f = exit_time_pdf(t);
    double next;
    if (f > 1e-300) {
      next = t - F / f;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    } else {
      next = 0.5 * (lo + hi);
    }
    if (std::abs(next - t) <= 1e-10 * (1.0 + std::abs(next))) return next;
    t = next;
  }
  throw std::runtime_error("exit_time_quantile: iteration cap exceeded");
}

double sample_unit_exit_time(RngStream& rng) {
  return exit_time_quantile(rng.next_uniform());
}

double exit_mgf(double lambda) {
  if (lambda > 0.0) throw std::domain_error("exit_mgf: lambda must be <= 0");
  const double s = std::sqrt(2.0 * std::abs(lambda));
  return 1.0 / std::cosh(s);
}

}  // namespace skelstop
