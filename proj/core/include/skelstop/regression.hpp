#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace skelstop {

enum class BasisFamily { Constant, Polynomial, PiecewiseLinear };

BasisFamily basis_family_from_string(const std::string& s);
std::string to_string(BasisFamily f);

// Regression basis over the stage frame (t, x, running max, recent
// (delta, sign) pairs).  Feature layout, in order:
//   Constant:        [1]
//   Polynomial:      [1, t, x, x^2, ..., x^degree, runmax, pairs...]
//   PiecewiseLinear: [1, t, x, (x-q_1)+, ..., (x-q_degree)+, runmax, pairs...]
// pairs... = (delta, sign) for the most recent `window` grid events,
// zero-padded at early stages.  Knots q_m are per-stage, evenly spaced
// over the training range of x, and stored with the fitted model.
struct BasisSpec {
  BasisFamily family = BasisFamily::Polynomial;
  int degree = 2;
  int window = 0;
  double clip_bound = 1e8;   // predictions are clamped to +-clip_bound
  bool itm_filter = false;   // fit and stop only where the reward is > 0
};

std::size_t feature_count(const BasisSpec& b);

// Writes feature_count(b) values to out.  recent_deltas/recent_signs
// hold `window` entries, most recent first (callers zero-pad).
void build_features(const BasisSpec& b, const std::vector<double>& knots, double t,
                    double x, double runmax, const double* recent_deltas,
                    const double* recent_signs, double* out);

struct ContinuationModel {
  int stage = 0;
  BasisSpec basis;
  std::vector<double> knots;   // PiecewiseLinear only
  std::vector<double> coeffs;  // length feature_count(basis)
  bool ridged = false;         // Tikhonov fallback engaged during the fit

  double predict(const double* features) const;
};

// Least squares by normal equations.  design is row-major n x p.  If
// the plain solve is rank-deficient or unstable, refits with ridge
// term 1e-10 * trace(X'X) on the diagonal and sets `ridged`.
ContinuationModel fit_continuation(const std::vector<double>& design,
                                   const std::vector<double>& targets, std::size_t n,
                                   const BasisSpec& basis, int stage,
                                   std::vector<double> knots = {});

}  // namespace skelstop
