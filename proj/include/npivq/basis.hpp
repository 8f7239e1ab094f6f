#pragma once

#include <Eigen/Core>
#include <vector>

namespace npivq {

enum class BasisFamily { Cosine, BSpline, Legendre };

const char* to_string(BasisFamily family);
BasisFamily basis_family_from_string(const std::string& name);

/// A sieve basis of dimension J on [0,1].
///
/// Cosine:   phi_j(x) = sqrt(2) cos(pi j x), j = 1..J (no constant function).
/// BSpline:  J unnormalized B-splines of the given order on uniform knots
///           (partition of unity); requires J >= order.
/// Legendre: orthonormal shifted Legendre polynomials, degrees 0..J-1.
struct BasisSpec {
  BasisFamily family = BasisFamily::Cosine;
  int dimension = 1;
  int bspline_order = 4;

  void validate() const;  // throws InvalidInputError on a bad spec
};

/// Weighting function mu on [0,1], strictly positive. Tabulated weights are
/// interpolated piecewise-linearly between grid points.
class WeightFn {
 public:
  static WeightFn uniform();
  static WeightFn tabulated(std::vector<double> grid, std::vector<double> values);

  double operator()(double x) const;
  bool is_uniform() const { return uniform_; }

 private:
  WeightFn() = default;
  bool uniform_ = true;
  std::vector<double> grid_;
  std::vector<double> values_;
};

/// (phi_1(x), ..., phi_J(x)). Throws on x outside [0,1].
Eigen::VectorXd eval_basis(const BasisSpec& spec, double x);

/// n x J matrix with row i = eval_basis(spec, points[i]).
Eigen::MatrixXd design_matrix(const BasisSpec& spec, const Eigen::VectorXd& points);

/// G_mu = int phi(x) phi(x)' mu(x) dx by composite Gauss-Legendre quadrature.
/// `subintervals` = 0 picks max(2J, 32); an explicit value must be >= 2J.
/// Result is symmetrized; a numerically singular Gram raises NumericError.
Eigen::MatrixXd gram_matrix(const BasisSpec& spec, const WeightFn& mu, int subintervals = 0);

/// Growth bound zeta(J): sqrt(J) for Cosine and BSpline, J for Legendre.
double zeta_growth(const BasisSpec& spec);

}  // namespace npivq
