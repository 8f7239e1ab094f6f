#include "npivq/estimators.hpp"

#include <cmath>
#include <string>

#include "npivq/errors.hpp"

namespace npivq {

void Sample::validate() const {
  if (y.size() != x.size() || y.size() != w.size())
    throw InvalidInputError("sample: y, x, w must have equal length");
  if (y.size() < 4) throw InvalidInputError("sample: need n >= 4");
  if (!y.allFinite() || !x.allFinite() || !w.allFinite())
    throw InvalidInputError("sample: non-finite entries");
  if (x.minCoeff() < 0.0 || x.maxCoeff() > 1.0)
    throw InvalidInputError("sample: x outside [0,1]; rescale first");
  if (w.minCoeff() < 0.0 || w.maxCoeff() > 1.0)
    throw InvalidInputError("sample: w outside [0,1]; rescale first");
}

SieveDesign build_design(const Sample& sample, const BasisSpec& psi_spec,
                         const BasisSpec& b_spec, const WeightFn& mu) {
  sample.validate();
  psi_spec.validate();
  b_spec.validate();
  if (b_spec.dimension < psi_spec.dimension)
    throw InvalidInputError("build_design: instrument dimension K must satisfy K >= J");
  SieveDesign d;
  d.psi_spec = psi_spec;
  d.b_spec = b_spec;
  d.psi = design_matrix(psi_spec, sample.x);
  d.b = design_matrix(b_spec, sample.w);
  d.g_mu = gram_matrix(psi_spec, mu);
  return d;
}

Eigen::MatrixXd ahat_matrix(const SieveDesign& design, const TolerancePolicy& tol,
                            bool* rank_deficient) {
  const Eigen::Index n = design.n();
  if (n < design.j())
    throw InvalidInputError("ahat_matrix: need n >= J observations");
  // Sample-size normalized form: A = [Sbp' Sb^- Sbp]^- Sbp' Sb^- with
  // Sb = B'B/n, Sbp = B'Psi/n; equal to the n-scaled display.
  const Eigen::MatrixXd sb = design.b.transpose() * design.b / static_cast<double>(n);
  const Eigen::MatrixXd sbp = design.b.transpose() * design.psi / static_cast<double>(n);
  const Eigen::MatrixXd sb_pinv = pinv_left(sb, tol);
  Eigen::MatrixXd mid = sbp.transpose() * sb_pinv * sbp;
  mid = 0.5 * (mid + mid.transpose());
  int rank = 0;
  const Eigen::MatrixXd mid_pinv = pinv_left(mid, tol, &rank);
  if (rank_deficient) *rank_deficient = rank < design.j();
  return mid_pinv * sbp.transpose() * sb_pinv;
}

SieveFit fit_npiv(const Sample& sample, const SieveDesign& design, const TolerancePolicy& tol) {
  if (sample.size() != design.n())
    throw InvalidInputError("fit_npiv: sample and design sizes differ");
  SieveFit fit;
  fit.a_hat = ahat_matrix(design, tol, &fit.rank_deficient);
  fit.coefficients = fit.a_hat * (design.b.transpose() * sample.y / static_cast<double>(design.n()));
  return fit;
}

double quad_plugin(const SieveFit& fit, const SieveDesign& design) {
  return fit.coefficients.dot(design.g_mu * fit.coefficients);
}

namespace {

// Rows of U are u_i' = Y_i (A_hat b(W_i))'.
Eigen::MatrixXd loo_rows(const Sample& sample, const SieveDesign& design,
                         const TolerancePolicy& tol) {
  if (sample.size() != design.n())
    throw InvalidInputError("quad_loo: sample and design sizes differ");
  if (sample.size() < 4) throw InvalidInputError("quad_loo: need n >= 4");
  const Eigen::MatrixXd a_hat = ahat_matrix(design, tol);
  return sample.y.asDiagonal() * (design.b * a_hat.transpose());
}

}  // namespace

double quad_loo(const Sample& sample, const SieveDesign& design, const TolerancePolicy& tol) {
  const Eigen::MatrixXd u = loo_rows(sample, design, tol);
  const Eigen::Index n = u.rows();
  Eigen::VectorXd total = Eigen::VectorXd::Zero(u.cols());
  double diag = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    total += u.row(i);
    diag += u.row(i) * design.g_mu * u.row(i).transpose();
  }
  const double full = total.dot(design.g_mu * total);
  return (full - diag) / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double quad_loo_bruteforce(const Sample& sample, const SieveDesign& design,
                           const TolerancePolicy& tol) {
  const Eigen::Index n = sample.size();
  if (n > 5000)
    throw ResourceError("quad_loo_bruteforce: refusing n > 5000 (O(n^2) oracle)");
  const Eigen::MatrixXd a_hat = ahat_matrix(design, tol);
  // Q = A' G A in the instrument basis, so each pair term is Y_i Y_i' b_i' Q b_i'.
  const Eigen::MatrixXd q = a_hat.transpose() * design.g_mu * a_hat;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd qb_i = q * design.b.row(i).transpose();
    for (Eigen::Index ip = i + 1; ip < n; ++ip) {
      acc += sample.y[i] * sample.y[ip] * design.b.row(ip).dot(qb_i);
    }
  }
  return 2.0 * acc / (static_cast<double>(n) * static_cast<double>(n - 1));
}

}  // namespace npivq
