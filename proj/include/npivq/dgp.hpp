#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "npivq/basis.hpp"
#include "npivq/rng.hpp"
#include "npivq/sample.hpp"

namespace npivq {

enum class Regime { Mild, Severe };

const char* to_string(Regime regime);
Regime regime_from_string(const std::string& name);

/// Synthetic NPIV model with conditional density
///   f_{X|W}(x|w) = 1 + sum_j 2 nu_j cos(pi j x) cos(pi j w)
/// on [0,1]^2, so the conditional expectation operator is exactly
/// diag(nu_1, nu_2, ...) in the cosine basis. Structural function
/// h0(x) = sum_j c_j sqrt(2) cos(pi j x) with c_j = c_h j^{-(p+0.55)}.
struct DgpSpec {
  Regime regime = Regime::Mild;
  double zeta = 2.0;
  double p = 1.0;
  double nu_scale = 0.2;   // c_nu
  double h_scale = 1.0;    // c_h
  double sigma_eta = 0.5;
  double rho_endog = 0.0;
  int j_op = 200;
  int j_h = 200;
  double ellipsoid_bound = 10.0;  // L

  std::vector<double> nu;        // derived, length j_op
  std::vector<double> h_coeffs;  // derived, length j_h
};

/// Validates parameters, derives nu and h_coeffs, and enforces
/// sum_j 2 nu_j <= 1 (density positivity) and the ellipsoid bound
/// sum_j c_j^2 j^{2p} <= L.
DgpSpec make_dgp(Regime regime, double zeta, double p, double c_nu, double c_h,
                 double sigma_eta, double rho_endog, int j_op = 200, int j_h = 200,
                 double ellipsoid_bound = 10.0);

double conditional_density(const DgpSpec& dgp, double x, double w);

/// F(x|w) = x + sum_j (2 nu_j / (pi j)) cos(pi j w) sin(pi j x).
double conditional_cdf(const DgpSpec& dgp, double x, double w);

double h0_eval(const DgpSpec& dgp, double x);

/// W ~ U[0,1]; X = F^{-1}(V|W) by bisection to |F - v| < 1e-10;
/// U = rho (phi_1(X) - nu_1 phi_1(W)) + sigma_eta eta (so E[U|W] = 0 exactly);
/// Y = h0(X) + U. Deterministic given the stream.
Sample draw_sample(const DgpSpec& dgp, int n, RngStream& stream);
Sample draw_sample(const DgpSpec& dgp, int n, std::uint64_t seed);

/// f(h0) = sum_j c_j^2 (Parseval, uniform mu).
double true_functional(const DgpSpec& dgp);

/// Quadrature route: int h0(x)^2 mu(x) dx.
double true_functional_quadrature(const DgpSpec& dgp, const WeightFn& mu);

/// Sieve measure of ill-posedness of the diagonal design: tau_J = 1/nu_J.
double true_tau(const DgpSpec& dgp, int j);

struct ExogeneityReport {
  Eigen::VectorXd coef;      // regression of U on [1, b^K(W)]
  Eigen::VectorXd tstat;
  double corr_u_phi1x = 0.0; // correlation of U with phi_1(X)
  double corr_se = 0.0;
  bool exogenous_ok = false; // all |t| <= 3
};

ExogeneityReport check_exogeneity(const DgpSpec& dgp, int n, std::uint64_t seed);

}  // namespace npivq
