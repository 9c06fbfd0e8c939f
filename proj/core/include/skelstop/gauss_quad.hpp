#pragma once

#include <vector>

namespace skelstop {

// Quadrature rule on [0,1]: sum_i weights[i] * f(nodes[i]) integrates
// w(v) f(v) dv exactly for polynomial f up to degree 2n-1, where w is
// the weight the rule was built for.
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre on [0,1] (w = 1).
QuadRule gauss_legendre01(int n);

// Gauss-Jacobi on [0,1] with weight v^beta * (1-v)^alpha; requires
// alpha, beta > -1.  Built by Golub-Welsch from the Jacobi recurrence.
QuadRule gauss_jacobi01(int n, double alpha, double beta);

}  // namespace skelstop
