#include "skelstop/regression.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skelstop {

BasisFamily basis_family_from_string(const std::string& s) {
  if (s == "constant") return BasisFamily::Constant;
  if (s == "polynomial") return BasisFamily::Polynomial;
  if (s == "pwlinear") return BasisFamily::PiecewiseLinear;
  throw std::invalid_argument("basis_family_from_string: unknown family '" + s + "'");
}

std::string to_string(BasisFamily f) {
  switch (f) {
    case BasisFamily::Constant: return "constant";
    case BasisFamily::Polynomial: return "polynomial";
    case BasisFamily::PiecewiseLinear: return "pwlinear";
  }
  return "?";
}

std::size_t feature_count(const BasisSpec& b) {
  switch (b.family) {
    case BasisFamily::Constant:
      return 1;
    case BasisFamily::Polynomial:
      if (b.degree < 1) throw std::domain_error("feature_count: polynomial degree must be >= 1");
      return static_cast<std::size_t>(b.degree) + 3 + 2 * static_cast<std::size_t>(b.window);
    case BasisFamily::PiecewiseLinear:
      if (b.degree < 1) throw std::domain_error("feature_count: pwlinear degree must be >= 1");
      return static_cast<std::size_t>(b.degree) + 4 + 2 * static_cast<std::size_t>(b.window);
  }
  throw std::domain_error("feature_count: bad family");
}

void build_features(const BasisSpec& b, const std::vector<double>& knots, double t,
                    double x, double runmax, const double* recent_deltas,
                    const double* recent_signs, double* out) {
  std::size_t k = 0;
  out[k++] = 1.0;
  if (b.family == BasisFamily::Constant) return;
  out[k++] = t;
  if (b.family == BasisFamily::Polynomial) {
    double pw = 1.0;
    for (int d = 1; d <= b.degree; ++d) {
      pw *= x;
      out[k++] = pw;
    }
  } else {
    out[k++] = x;
    for (int d = 0; d < b.degree; ++d)
      out[k++] = std::max(x - knots[static_cast<std::size_t>(d)], 0.0);
  }
  out[k++] = runmax;
  for (int w = 0; w < b.window; ++w) {
    out[k++] = recent_deltas[w];
    out[k++] = recent_signs[w];
  }
}

double ContinuationModel::predict(const double* features) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) acc += coeffs[i] * features[i];
  return std::clamp(acc, -basis.clip_bound, basis.clip_bound);
}

ContinuationModel fit_continuation(const std::vector<double>& design,
                                   const std::vector<double>& targets, std::size_t n,
                                   const BasisSpec& basis, int stage,
                                   std::vector<double> knots) {
  const std::size_t p = feature_count(basis);
  if (design.size() != n * p)
    throw std::invalid_argument("fit_continuation: design size != n * feature_count");
  if (targets.size() != n) throw std::invalid_argument("fit_continuation: targets size != n");
  if (n == 0) throw std::invalid_argument("fit_continuation: empty sample");
  if (basis.family == BasisFamily::PiecewiseLinear &&
      knots.size() != static_cast<std::size_t>(basis.degree))
    throw std::invalid_argument("fit_continuation: pwlinear needs `degree` knots");

  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> X(
      design.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  Eigen::Map<const Eigen::VectorXd> y(targets.data(), static_cast<Eigen::Index>(n));

  const Eigen::MatrixXd G = X.transpose() * X;
  const Eigen::VectorXd rhs = X.transpose() * y;

  ContinuationModel m;
  m.stage = stage;
  m.basis = basis;
  m.knots = std::move(knots);

  Eigen::VectorXd beta = G.ldlt().solve(rhs);
  const double scale = G.norm() * beta.norm() + rhs.norm();
  const bool bad = !beta.allFinite() ||
                   (G * beta - rhs).norm() > 1e-8 * std::max(scale, 1e-30);
  if (bad) {
    // Rank-deficient or unstable design: Tikhonov fallback.
    Eigen::MatrixXd Gr = G;
    const double ridge = 1e-10 * G.trace();
    Gr.diagonal().array() += std::max(ridge, 1e-300);
    beta = Gr.ldlt().solve(rhs);
    m.ridged = true;
  }
  m.coeffs.assign(beta.data(), beta.data() + p);
  return m;
}

}  // namespace skelstop
