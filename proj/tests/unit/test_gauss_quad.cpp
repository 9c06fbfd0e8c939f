#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "skelstop/gauss_quad.hpp"

using namespace skelstop;

namespace {

double apply(const QuadRule& q, double (*f)(double)) {
  double acc = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) acc += q.weights[i] * f(q.nodes[i]);
  return acc;
}

}  // namespace

TEST_SUITE("gauss_quad") {

TEST_CASE("legendre nodes lie in (0,1) with positive weights summing to 1") {
  for (int n : {1, 2, 4, 8, 16, 32}) {
    QuadRule q = gauss_legendre01(n);
    REQUIRE(q.nodes.size() == static_cast<std::size_t>(n));
    double wsum = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      CHECK(q.nodes[i] > 0.0);
      CHECK(q.nodes[i] < 1.0);
      CHECK(q.weights[i] > 0.0);
      if (i) CHECK(q.nodes[i] > q.nodes[i - 1]);
      wsum += q.weights[i];
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("legendre integrates monomials exactly to degree 2n-1") {
  for (int n : {2, 5, 12}) {
    QuadRule q = gauss_legendre01(n);
    for (int j = 0; j <= 2 * n - 1; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < q.nodes.size(); ++i)
        acc += q.weights[i] * std::pow(q.nodes[i], j);
      CHECK(acc == doctest::Approx(1.0 / (j + 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("legendre handles a smooth transcendental integrand") {
  QuadRule q = gauss_legendre01(16);
  CHECK(apply(q, [](double x) { return std::exp(x); }) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  CHECK(apply(q, [](double x) { return std::cos(3.0 * x); }) ==
        doctest::Approx(std::sin(3.0) / 3.0).epsilon(1e-13));
}

TEST_CASE("jacobi with singular endpoint weight integrates v^(beta+j) exactly") {
  // beta = H - 3/2 is the weight exponent used by the kernel quadrature.
  for (double hurst : {0.6, 0.75, 0.9}) {
    const double beta = hurst - 1.5;
    for (int n : {4, 12, 24}) {
      QuadRule q = gauss_jacobi01(n, 0.0, beta);
      REQUIRE(q.nodes.size() == static_cast<std::size_t>(n));
      for (int j = 0; j <= 2 * n - 1; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i)
          acc += q.weights[i] * std::pow(q.nodes[i], j);
        // integral_0^1 v^(beta+j) dv = 1/(beta+j+1); the weight is folded
        // into the quadrature weights.
        CHECK(acc == doctest::Approx(1.0 / (beta + j + 1.0)).epsilon(1e-11));
      }
      for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        CHECK(q.nodes[i] > 0.0);
        CHECK(q.nodes[i] < 1.0);
        CHECK(q.weights[i] > 0.0);
      }
    }
  }
}

TEST_CASE("jacobi reduces to legendre at alpha = beta = 0") {
  QuadRule a = gauss_jacobi01(9, 0.0, 0.0);
  QuadRule b = gauss_legendre01(9);
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(a.nodes[i] == doctest::Approx(b.nodes[i]).epsilon(1e-12));
    CHECK(a.weights[i] == doctest::Approx(b.weights[i]).epsilon(1e-12));
  }
}

TEST_CASE("invalid constructions are rejected") {
  CHECK_THROWS_AS(gauss_legendre01(0), std::domain_error);
  CHECK_THROWS_AS(gauss_jacobi01(4, -1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(gauss_jacobi01(4, 0.0, -1.5), std::domain_error);
}

}  // TEST_SUITE
