#include "npivq/basis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "npivq/errors.hpp"
#include "npivq/quadrature.hpp"

namespace npivq {

const char* to_string(BasisFamily family) {
  switch (family) {
    case BasisFamily::Cosine: return "cosine";
    case BasisFamily::BSpline: return "bspline";
    case BasisFamily::Legendre: return "legendre";
  }
  return "?";
}

BasisFamily basis_family_from_string(const std::string& name) {
  if (name == "cosine") return BasisFamily::Cosine;
  if (name == "bspline") return BasisFamily::BSpline;
  if (name == "legendre") return BasisFamily::Legendre;
  throw InvalidInputError("unknown basis family: " + name);
}

void BasisSpec::validate() const {
  if (dimension < 1) throw InvalidInputError("basis: dimension J must be >= 1");
  if (family == BasisFamily::BSpline) {
    if (bspline_order < 2) throw InvalidInputError("basis: B-spline order must be >= 2");
    if (dimension < bspline_order)
      throw InvalidInputError("basis: B-spline needs J >= order, got J=" +
                              std::to_string(dimension) + " order=" +
                              std::to_string(bspline_order));
  }
}

WeightFn WeightFn::uniform() { return WeightFn(); }

WeightFn WeightFn::tabulated(std::vector<double> grid, std::vector<double> values) {
  if (grid.size() != values.size() || grid.size() < 2)
    throw InvalidInputError("weight: grid and values need equal length >= 2");
  if (grid.front() != 0.0 || grid.back() != 1.0)
    throw InvalidInputError("weight: grid must start at 0 and end at 1");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1]) throw InvalidInputError("weight: grid must be strictly increasing");
  for (double v : values)
    if (!(v > 0.0)) throw InvalidInputError("weight: values must be strictly positive");
  WeightFn w;
  w.uniform_ = false;
  w.grid_ = std::move(grid);
  w.values_ = std::move(values);
  return w;
}

double WeightFn::operator()(double x) const {
  if (uniform_) return 1.0;
  if (x <= grid_.front()) return values_.front();
  if (x >= grid_.back()) return values_.back();
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - grid_.begin());
  const double t = (x - grid_[hi - 1]) / (grid_[hi] - grid_[hi - 1]);
  return (1.0 - t) * values_[hi - 1] + t * values_[hi];
}

namespace {

void eval_cosine(int J, double x, double* out) {
  // phi_j = sqrt2 cos(pi j x) via the Chebyshev recurrence on cos(j theta).
  const double sq2 = std::sqrt(2.0);
  const double c1 = std::cos(M_PI * x);
  double cm2 = 1.0, cm1 = c1;
  out[0] = sq2 * c1;
  for (int j = 2; j <= J; ++j) {
    const double cj = 2.0 * c1 * cm1 - cm2;
    out[j - 1] = sq2 * cj;
    cm2 = cm1;
    cm1 = cj;
  }
}

void eval_legendre(int J, double x, double* out) {
  // Orthonormal shifted Legendre: sqrt(2k+1) P_k(2x-1), k = 0..J-1.
  const double t = 2.0 * x - 1.0;
  double pm2 = 1.0, pm1 = t;
  out[0] = 1.0;
  if (J >= 2) out[1] = std::sqrt(3.0) * t;
  for (int k = 2; k < J; ++k) {
    const double pk = ((2 * k - 1) * t * pm1 - (k - 1) * pm2) / k;
    out[k] = std::sqrt(2.0 * k + 1.0) * pk;
    pm2 = pm1;
    pm1 = pk;
  }
}

std::vector<double> bspline_knots(int J, int order) {
  // Clamped uniform knot vector on [0,1]: J + order knots, J - order interior.
  std::vector<double> t(static_cast<std::size_t>(J + order));
  const int interior = J - order;
  for (int i = 0; i < order; ++i) t[i] = 0.0;
  for (int i = 0; i < interior; ++i) t[order + i] = static_cast<double>(i + 1) / (interior + 1);
  for (int i = 0; i < order; ++i) t[J + i] = 1.0;
  return t;
}

void eval_bspline(int J, int order, double x, double* out) {
  const std::vector<double> t = bspline_knots(J, order);
  std::fill(out, out + J, 0.0);
  // Knot span index i with t[i] <= x < t[i+1], clamped to the last real span.
  int i = order - 1;
  while (i < J - 1 && x >= t[i + 1]) ++i;
  // Cox-de Boor for the `order` non-zero splines on the span.
  std::vector<double> N(static_cast<std::size_t>(order), 0.0);
  std::vector<double> left(static_cast<std::size_t>(order)), right(static_cast<std::size_t>(order));
  N[0] = 1.0;
  for (int j = 1; j < order; ++j) {
    left[j] = x - t[i + 1 - j];
    right[j] = t[i + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double denom = right[r + 1] + left[j - r];
      const double tmp = denom != 0.0 ? N[r] / denom : 0.0;
      N[r] = saved + right[r + 1] * tmp;
      saved = left[j - r] * tmp;
    }
    N[j] = saved;
  }
  for (int r = 0; r < order; ++r) {
    const int idx = i - order + 1 + r;
    if (idx >= 0 && idx < J) out[idx] = N[r];
  }
}

void eval_into(const BasisSpec& spec, double x, double* out) {
  switch (spec.family) {
    case BasisFamily::Cosine: eval_cosine(spec.dimension, x, out); return;
    case BasisFamily::Legendre: eval_legendre(spec.dimension, x, out); return;
    case BasisFamily::BSpline: eval_bspline(spec.dimension, spec.bspline_order, x, out); return;
  }
}

}  // namespace

Eigen::VectorXd eval_basis(const BasisSpec& spec, double x) {
  spec.validate();
  if (!(x >= 0.0 && x <= 1.0))
    throw InvalidInputError("eval_basis: x outside [0,1]: " + std::to_string(x));
  Eigen::VectorXd v(spec.dimension);
  eval_into(spec, x, v.data());
  return v;
}

Eigen::MatrixXd design_matrix(const BasisSpec& spec, const Eigen::VectorXd& points) {
  spec.validate();
  if (points.size() == 0) throw InvalidInputError("design_matrix: empty point set");
  Eigen::MatrixXd m(points.size(), spec.dimension);
  Eigen::VectorXd row(spec.dimension);
  for (Eigen::Index i = 0; i < points.size(); ++i) {
    const double x = points[i];
    if (!(x >= 0.0 && x <= 1.0))
      throw InvalidInputError("design_matrix: point " + std::to_string(i) + " outside [0,1]");
    eval_into(spec, x, row.data());
    m.row(i) = row;
  }
  return m;
}

Eigen::MatrixXd gram_matrix(const BasisSpec& spec, const WeightFn& mu, int subintervals) {
  spec.validate();
  const int J = spec.dimension;
  if (subintervals == 0) subintervals = default_subintervals(J);
  if (subintervals < 2 * J)
    throw InvalidInputError("gram_matrix: need at least 2J subintervals");
  const QuadratureRule rule = gauss_legendre_composite(subintervals);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(J, J);
  Eigen::VectorXd phi(J);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    eval_into(spec, rule.nodes[q], phi.data());
    g.selfadjointView<Eigen::Lower>().rankUpdate(phi, rule.weights[q] * mu(rule.nodes[q]));
  }
  g = 0.5 * (Eigen::MatrixXd(g.selfadjointView<Eigen::Lower>()) +
             Eigen::MatrixXd(g.selfadjointView<Eigen::Lower>()).transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 1e-12 * hi))
    throw NumericError("gram_matrix: numerically singular Gram (min/max eigenvalue " +
                       std::to_string(lo) + "/" + std::to_string(hi) + ")");
  return g;
}

double zeta_growth(const BasisSpec& spec) {
  // Depends only on the family and J, so J >= order is not required here.
  if (spec.dimension < 1) throw InvalidInputError("zeta_growth: dimension must be >= 1");
  const double J = spec.dimension;
  return spec.family == BasisFamily::Legendre ? J : std::sqrt(J);
}

}  // namespace npivq
