#include "npivq/quadrature.hpp"

#include <algorithm>
#include <array>

#include "npivq/errors.hpp"

namespace npivq {

namespace {
// 10-point Gauss-Legendre abscissae/weights on [-1,1] (symmetric halves).
constexpr std::array<double, 5> kAbscissa = {
    0.1488743389816312108848260,
    0.4333953941292471907992659,
    0.6794095682990244062343274,
    0.8650633666889845107320967,
    0.9739065285171717200779640,
};
constexpr std::array<double, 5> kWeight = {
    0.2955242247147528701738930,
    0.2692667193099963550912269,
    0.2190863625159820439955349,
    0.1494513491505805931457763,
    0.0666713443086881375935688,
};
}  // namespace

QuadratureRule gauss_legendre_composite(int subintervals) {
  if (subintervals < 1) throw InvalidInputError("quadrature: subintervals must be >= 1");
  QuadratureRule rule;
  rule.nodes.reserve(10 * static_cast<std::size_t>(subintervals));
  rule.weights.reserve(rule.nodes.capacity());
  const double h = 1.0 / subintervals;
  for (int s = 0; s < subintervals; ++s) {
    const double mid = (s + 0.5) * h;
    for (int k = 4; k >= 0; --k) {
      rule.nodes.push_back(mid - 0.5 * h * kAbscissa[k]);
      rule.weights.push_back(0.5 * h * kWeight[k]);
    }
    for (int k = 0; k < 5; ++k) {
      rule.nodes.push_back(mid + 0.5 * h * kAbscissa[k]);
      rule.weights.push_back(0.5 * h * kWeight[k]);
    }
  }
  return rule;
}

int default_subintervals(int dimension) { return std::max(2 * dimension, 32); }

double integrate(const std::function<double(double)>& f, int subintervals) {
  const QuadratureRule rule = gauss_legendre_composite(subintervals);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
  return acc;
}

}  // namespace npivq
