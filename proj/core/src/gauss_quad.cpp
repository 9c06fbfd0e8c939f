#include "skelstop/gauss_quad.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace skelstop {

// Golub-Welsch: nodes are the eigenvalues of the symmetric tridiagonal
// recurrence matrix, weights come from the first eigenvector row.
QuadRule gauss_jacobi01(int n, double alpha, double beta) {
  if (n < 1) throw std::domain_error("gauss_jacobi01: n must be >= 1");
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw std::domain_error("gauss_jacobi01: alpha and beta must be > -1");

  const double ab = alpha + beta;
  Eigen::VectorXd diag(n), sub(n > 1 ? n - 1 : 1);
  diag(0) = (beta - alpha) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double q = 2.0 * k + ab;
    diag(k) = (beta * beta - alpha * alpha) / (q * (q + 2.0));
  }
  if (n > 1) {
    sub(0) = std::sqrt(4.0 * (alpha + 1.0) * (beta + 1.0) /
                       ((ab + 2.0) * (ab + 2.0) * (ab + 3.0)));
    for (int k = 2; k < n; ++k) {
      const double q = 2.0 * k + ab;
      sub(k - 1) = std::sqrt(4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
                             (q * q * (q + 1.0) * (q - 1.0)));
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(std::max(0, n - 1)));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("gauss_jacobi01: eigensolver failed");

  // Total mass of (1-x)^a (1+x)^b over [-1,1].
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                              std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));

  QuadRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = es.eigenvalues()(i);
    const double w = mu0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    // Map [-1,1] -> [0,1]; the weight picks up 2^(a+b+1) which we divide out.
    r.nodes[i] = 0.5 * (1.0 + x);
    r.weights[i] = w / std::exp((ab + 1.0) * std::log(2.0));
  }
  return r;
}

QuadRule gauss_legendre01(int n) { return gauss_jacobi01(n, 0.0, 0.0); }

}  // namespace skelstop
