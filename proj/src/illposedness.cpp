#include "npivq/illposedness.hpp"

#include <cmath>
#include <string>

#include "npivq/errors.hpp"
#include "npivq/quadrature.hpp"

namespace npivq {

IllposednessReport tau_hat(const SieveDesign& design, const TolerancePolicy& tol) {
  const Eigen::Index n = design.n();
  if (n <= design.k())
    throw InvalidInputError("tau_hat: need n > K (got n=" + std::to_string(n) +
                            ", K=" + std::to_string(design.k()) + ")");
  const Eigen::MatrixXd sb = design.b.transpose() * design.b / static_cast<double>(n);
  const Eigen::MatrixXd sbp = design.b.transpose() * design.psi / static_cast<double>(n);
  const Eigen::MatrixXd whitened =
      sym_inv_sqrt(sb, tol) * sbp * sym_inv_sqrt(design.g_mu, tol);

  IllposednessReport rep;
  rep.j = design.j();
  rep.n = static_cast<int>(n);
  rep.s_hat = min_singular_value(whitened);
  if (rep.s_hat < 1e-12)
    throw NumericError("tau_hat: ill-posedness overflow, s_hat = " + std::to_string(rep.s_hat) +
                       " at J = " + std::to_string(rep.j));
  rep.tau_hat = 1.0 / rep.s_hat;
  rep.v_hat = v_hat(rep.tau_hat, rep.j, rep.n);
  return rep;
}

double v_hat(double tau, int j, int n) {
  if (!(tau > 0.0)) throw InvalidInputError("v_hat: tau must be > 0");
  if (j < 1) throw InvalidInputError("v_hat: J must be >= 1");
  if (n < 3) throw InvalidInputError("v_hat: n must be >= 3");
  return tau * tau * std::sqrt(static_cast<double>(j) * std::log(static_cast<double>(n))) /
         static_cast<double>(n);
}

Eigen::MatrixXd population_s_matrix(const DgpSpec& dgp, const BasisSpec& b_spec,
                                    const BasisSpec& psi_spec) {
  b_spec.validate();
  psi_spec.validate();
  const int k = b_spec.dimension, j = psi_spec.dimension;
  const int m = dgp.j_op;
  // f(x|w) = 1 + c(x)' diag(2 nu) c(w) with c_m(t) = cos(pi m t), so
  // S = (int b)(int psi)' + [int b c'] diag(2 nu) [int psi c']'.
  // Only 1D integrals are needed; resolve frequencies up to m + max(j,k).
  const int sub = std::max(2 * (m + std::max(j, k)), 64);
  const QuadratureRule rule = gauss_legendre_composite(sub);
  const Eigen::Index q = static_cast<Eigen::Index>(rule.size());

  Eigen::VectorXd wts(q), nodes(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    wts[i] = rule.weights[i];
    nodes[i] = rule.nodes[i];
  }
  const Eigen::MatrixXd bq = design_matrix(b_spec, nodes);      // q x K
  const Eigen::MatrixXd pq = design_matrix(psi_spec, nodes);    // q x J
  Eigen::MatrixXd cq(q, m);                                     // cos(pi m t) columns
  for (Eigen::Index i = 0; i < q; ++i) {
    const double c1 = std::cos(M_PI * nodes[i]);
    double cm2 = 1.0, cm1 = c1;
    cq(i, 0) = c1;
    for (int mm = 2; mm <= m; ++mm) {
      const double c = 2.0 * c1 * cm1 - cm2;
      cq(i, mm - 1) = c;
      cm2 = cm1; cm1 = c;
    }
  }
  const Eigen::VectorXd int_b = bq.transpose() * wts;                    // K
  const Eigen::VectorXd int_p = pq.transpose() * wts;                    // J
  const Eigen::MatrixXd bc = bq.transpose() * wts.asDiagonal() * cq;     // K x m
  const Eigen::MatrixXd pc = pq.transpose() * wts.asDiagonal() * cq;     // J x m
  Eigen::VectorXd two_nu(m);
  for (int i = 0; i < m; ++i) two_nu[i] = 2.0 * dgp.nu[static_cast<std::size_t>(i)];
  return int_b * int_p.transpose() + bc * two_nu.asDiagonal() * pc.transpose();
}

PopulationIllposedness population_s_and_tau(const DgpSpec& dgp, int j) {
  if (j < 1 || j > dgp.j_op)
    throw InvalidInputError("population_s_and_tau: J must be in [1, j_op]");
  const BasisSpec spec{BasisFamily::Cosine, j};
  const WeightFn mu = WeightFn::uniform();
  const Eigen::MatrixXd s = population_s_matrix(dgp, spec, spec);
  const Eigen::MatrixXd g_mu = gram_matrix(spec, mu);
  const Eigen::MatrixXd g_b = gram_matrix(spec, mu);
  PopulationIllposedness out;
  out.s_min = min_singular_value(sym_inv_sqrt(g_b) * s * sym_inv_sqrt(g_mu));
  out.tau = true_tau(dgp, j);
  return out;
}

}  // namespace npivq
