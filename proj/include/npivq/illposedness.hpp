#pragma once

#include <Eigen/Core>

#include "npivq/dgp.hpp"
#include "npivq/estimators.hpp"
#include "npivq/linalg.hpp"

namespace npivq {

struct IllposednessReport {
  int j = 0;
  int n = 0;
  double s_hat = 0.0;    // minimal singular value before inversion
  double tau_hat = 0.0;  // 1 / s_hat
  double v_hat = 0.0;    // tau_hat^2 sqrt(J log n) / n
};

/// tau_hat = 1 / s_min((B'B/n)^{-1/2} (B'Psi/n) G_mu^{-1/2}). G_mu^{-1/2}
/// comes from the quadrature Gram, not from data. Throws NumericError when
/// s_hat falls below 1e-12 (J infeasible for this n).
IllposednessReport tau_hat(const SieveDesign& design, const TolerancePolicy& tol = {});

/// V_hat(J) = tau^2 sqrt(J log n) / n, natural logarithm.
double v_hat(double tau, int j, int n);

struct PopulationIllposedness {
  double s_min = 0.0;  // s_J of G_b^{-1/2} S G_mu^{-1/2}, by quadrature
  double tau = 0.0;    // analytic 1 / nu_J for the diagonal design
};

/// Population S = E[b^K(W) psi^J(X)'] for the synthetic density, computed by
/// quadrature using the density's separable cosine expansion.
Eigen::MatrixXd population_s_matrix(const DgpSpec& dgp, const BasisSpec& b_spec,
                                    const BasisSpec& psi_spec);

/// s_J = s_min(G_b^{-1/2} S G_mu^{-1/2}) for the cosine sieve with K = J and
/// uniform mu, plus the analytic tau_J = 1/nu_J.
PopulationIllposedness population_s_and_tau(const DgpSpec& dgp, int j);

}  // namespace npivq
