#pragma once

#include <Eigen/Core>

#include "npivq/basis.hpp"
#include "npivq/linalg.hpp"
#include "npivq/sample.hpp"

namespace npivq {

/// Design matrices for one (J, K) pair: Psi over X, B over W, and the
/// quadrature Gram of the psi basis under mu. Requires K >= J.
struct SieveDesign {
  BasisSpec psi_spec;
  BasisSpec b_spec;
  Eigen::MatrixXd psi;   // n x J
  Eigen::MatrixXd b;     // n x K
  Eigen::MatrixXd g_mu;  // J x J

  Eigen::Index n() const { return psi.rows(); }
  int j() const { return psi_spec.dimension; }
  int k() const { return b_spec.dimension; }
};

/// Sieve 2SLS fit: hhat(x) = psi(x)' coefficients.
struct SieveFit {
  Eigen::VectorXd coefficients;  // length J
  Eigen::MatrixXd a_hat;         // J x K
  bool rank_deficient = false;
};

SieveDesign build_design(const Sample& sample, const BasisSpec& psi_spec,
                         const BasisSpec& b_spec, const WeightFn& mu);

/// A_hat = n [Psi'B (B'B)^- B'Psi]^- Psi'B (B'B)^-, all generalized inverses
/// by SVD cutoff. *rank_deficient flags a rank drop in the middle matrix.
Eigen::MatrixXd ahat_matrix(const SieveDesign& design, const TolerancePolicy& tol = {},
                            bool* rank_deficient = nullptr);

SieveFit fit_npiv(const Sample& sample, const SieveDesign& design,
                  const TolerancePolicy& tol = {});

/// Plug-in estimate of the quadratic functional: coefficients' G_mu coefficients.
double quad_plugin(const SieveFit& fit, const SieveDesign& design);

/// Leave-one-out U-statistic estimate of the quadratic functional, computed
/// through the O(n) identity sum_{i<i'} u_i' G u_{i'} =
/// ((sum u)' G (sum u) - sum u_i' G u_i) / 2 with u_i = Y_i A_hat b(W_i).
/// The accumulation runs in row order so results are reproducible bit-for-bit.
double quad_loo(const Sample& sample, const SieveDesign& design,
                const TolerancePolicy& tol = {});

/// Literal O(n^2) pairwise sum; test oracle. Refuses n > 5000.
double quad_loo_bruteforce(const Sample& sample, const SieveDesign& design,
                           const TolerancePolicy& tol = {});

}  // namespace npivq
