#include "npivq/quadrature.hpp"

#include <cmath>

#include "doctest.h"

#include "npivq/errors.hpp"

using namespace npivq;

TEST_CASE("weights sum to one and nodes stay inside [0,1]") {
  for (int sub : {1, 3, 32}) {
    const QuadratureRule rule = gauss_legendre_composite(sub);
    CHECK(rule.size() == 10u * static_cast<std::size_t>(sub));
    double total = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      total += rule.weights[i];
      CHECK(rule.nodes[i] > 0.0);
      CHECK(rule.nodes[i] < 1.0);
      if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("polynomials up to degree 19 integrate exactly on one panel") {
  // int_0^1 x^19 dx = 1/20
  const double v = integrate([](double x) { return std::pow(x, 19); }, 1);
  CHECK(v == doctest::Approx(0.05).epsilon(1e-13));
}

TEST_CASE("oscillatory integrand resolved at default panel count") {
  const int j = 64;
  const double v = integrate(
      [&](double x) { return 2.0 * std::cos(M_PI * j * x) * std::cos(M_PI * j * x); },
      default_subintervals(j));
  CHECK(v == doctest::Approx(1.0).epsilon(1e-11));
  const double cross = integrate(
      [&](double x) { return 2.0 * std::cos(M_PI * j * x) * std::cos(M_PI * (j - 1) * x); },
      default_subintervals(j));
  CHECK(std::abs(cross) < 1e-11);
}

TEST_CASE("input guard") {
  CHECK_THROWS_AS(gauss_legendre_composite(0), InvalidInputError);
}
