#pragma once

#include <functional>
#include <vector>

namespace npivq {

/// Composite Gauss-Legendre rule on [0,1]: 10 nodes per subinterval.
/// Exact for polynomials up to degree 19 on each subinterval; the default
/// subinterval count max(2J, 32) resolves cosine oscillation up to J ~ 200.
struct QuadratureRule {
  std::vector<double> nodes;    // in [0,1], ascending
  std::vector<double> weights;  // positive, summing to 1

  std::size_t size() const { return nodes.size(); }
};

/// Builds the composite rule with `subintervals` equal panels.
QuadratureRule gauss_legendre_composite(int subintervals);

/// Default panel count used throughout for a basis of dimension J.
int default_subintervals(int dimension);

/// Integrate f over [0,1] with the given panel count.
double integrate(const std::function<double(double)>& f, int subintervals);

}  // namespace npivq
