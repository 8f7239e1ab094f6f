#include "npivq/dgp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <cmath>
#include <string>

#include "npivq/errors.hpp"
#include "npivq/estimators.hpp"
#include "npivq/quadrature.hpp"

namespace npivq {

namespace {
constexpr double kSq2 = 1.4142135623730951;
}

const char* to_string(Regime regime) { return regime == Regime::Mild ? "mild" : "severe"; }

Regime regime_from_string(const std::string& name) {
  if (name == "mild") return Regime::Mild;
  if (name == "severe") return Regime::Severe;
  throw InvalidInputError("unknown regime: " + name);
}

DgpSpec make_dgp(Regime regime, double zeta, double p, double c_nu, double c_h,
                 double sigma_eta, double rho_endog, int j_op, int j_h,
                 double ellipsoid_bound) {
  if (!(zeta > 0.0)) throw InvalidInputError("dgp: zeta must be > 0");
  if (!(p > 0.0)) throw InvalidInputError("dgp: p must be > 0");
  if (!(c_nu > 0.0 && c_nu <= 0.5)) throw InvalidInputError("dgp: c_nu must be in (0, 0.5]");
  if (!(sigma_eta >= 0.0)) throw InvalidInputError("dgp: sigma_eta must be >= 0");
  if (j_op < 1 || j_h < 1) throw InvalidInputError("dgp: truncations must be >= 1");

  DgpSpec dgp;
  dgp.regime = regime;
  dgp.zeta = zeta;
  dgp.p = p;
  dgp.nu_scale = c_nu;
  dgp.h_scale = c_h;
  dgp.sigma_eta = sigma_eta;
  dgp.rho_endog = rho_endog;
  dgp.j_op = j_op;
  dgp.j_h = j_h;
  dgp.ellipsoid_bound = ellipsoid_bound;

  dgp.nu.resize(static_cast<std::size_t>(j_op));
  double sum2nu = 0.0;
  for (int j = 1; j <= j_op; ++j) {
    const double nu_j = regime == Regime::Mild ? c_nu * std::pow(j, -zeta)
                                               : c_nu * std::exp(-0.5 * std::pow(j, zeta));
    dgp.nu[static_cast<std::size_t>(j - 1)] = nu_j;
    sum2nu += 2.0 * nu_j;
    if (!(nu_j > 0.0 && nu_j < 1.0)) throw InvalidInputError("dgp: nu_j outside (0,1)");
    if (j > 1 && !(nu_j < dgp.nu[static_cast<std::size_t>(j - 2)]))
      throw InvalidInputError("dgp: nu must be strictly decreasing");
  }
  if (sum2nu > 1.0)
    throw InvalidInputError("dgp: density positivity violated, sum 2 nu_j = " +
                            std::to_string(sum2nu) + " > 1");

  dgp.h_coeffs.resize(static_cast<std::size_t>(j_h));
  double ellipsoid = 0.0;
  for (int j = 1; j <= j_h; ++j) {
    const double c_j = c_h * std::pow(j, -(p + 0.55));
    dgp.h_coeffs[static_cast<std::size_t>(j - 1)] = c_j;
    ellipsoid += c_j * c_j * std::pow(j, 2.0 * p);
  }
  if (ellipsoid > ellipsoid_bound)
    throw InvalidInputError("dgp: h0 outside the Sobolev ellipsoid, sum c_j^2 j^{2p} = " +
                            std::to_string(ellipsoid) + " > L = " + std::to_string(ellipsoid_bound));
  return dgp;
}

double conditional_density(const DgpSpec& dgp, double x, double w) {
  const double cx1 = std::cos(M_PI * x), cw1 = std::cos(M_PI * w);
  double cxm2 = 1.0, cxm1 = cx1, cwm2 = 1.0, cwm1 = cw1;
  double acc = 1.0 + 2.0 * dgp.nu[0] * cx1 * cw1;
  for (std::size_t j = 2; j <= dgp.nu.size(); ++j) {
    const double cx = 2.0 * cx1 * cxm1 - cxm2;
    const double cw = 2.0 * cw1 * cwm1 - cwm2;
    acc += 2.0 * dgp.nu[j - 1] * cx * cw;
    cxm2 = cxm1; cxm1 = cx;
    cwm2 = cwm1; cwm1 = cw;
  }
  return acc;
}

namespace {

// CDF in x for fixed w given precomputed a_j = 2 nu_j cos(pi j w)/(pi j):
// F(x) = x + sum_j a_j sin(pi j x), evaluated with the angle-addition
// recurrence (two transcendentals per call).
double cdf_from_coeffs(const std::vector<double>& a, double x) {
  const double s1 = std::sin(M_PI * x), c1 = std::cos(M_PI * x);
  double s = s1, c = c1;
  double acc = a[0] * s1;
  for (std::size_t j = 2; j <= a.size(); ++j) {
    const double sj = s * c1 + c * s1;
    const double cj = c * c1 - s * s1;
    acc += a[j - 1] * sj;
    s = sj; c = cj;
  }
  return x + acc;
}

std::vector<double> cdf_coeffs(const DgpSpec& dgp, double w) {
  std::vector<double> a(dgp.nu.size());
  const double cw1 = std::cos(M_PI * w);
  double cm2 = 1.0, cm1 = cw1;
  a[0] = 2.0 * dgp.nu[0] * cw1 / M_PI;
  for (std::size_t j = 2; j <= dgp.nu.size(); ++j) {
    const double cw = 2.0 * cw1 * cm1 - cm2;
    a[j - 1] = 2.0 * dgp.nu[j - 1] * cw / (M_PI * static_cast<double>(j));
    cm2 = cm1; cm1 = cw;
  }
  return a;
}

double invert_cdf(const std::vector<double>& a, double v) {
  double lo = 0.0, hi = 1.0, mid = 0.5, f = 0.0;
  for (int it = 0; it < 100; ++it) {
    mid = 0.5 * (lo + hi);
    f = cdf_from_coeffs(a, mid);
    if (std::abs(f - v) < 1e-10) return mid;
    if (f > v) hi = mid; else lo = mid;
  }
  if (std::abs(f - v) > 1e-8)
    throw NumericError("dgp: CDF bisection failed to bracket");
  return mid;
}

}  // namespace

double conditional_cdf(const DgpSpec& dgp, double x, double w) {
  if (!(x >= 0.0 && x <= 1.0 && w >= 0.0 && w <= 1.0))
    throw InvalidInputError("conditional_cdf: arguments outside [0,1]");
  return cdf_from_coeffs(cdf_coeffs(dgp, w), x);
}

double h0_eval(const DgpSpec& dgp, double x) {
  const double c1 = std::cos(M_PI * x);
  double cm2 = 1.0, cm1 = c1;
  double acc = dgp.h_coeffs[0] * c1;
  for (std::size_t j = 2; j <= dgp.h_coeffs.size(); ++j) {
    const double cj = 2.0 * c1 * cm1 - cm2;
    acc += dgp.h_coeffs[j - 1] * cj;
    cm2 = cm1; cm1 = cj;
  }
  return kSq2 * acc;
}

Sample draw_sample(const DgpSpec& dgp, int n, RngStream& stream) {
  if (n < 4) throw InvalidInputError("draw_sample: need n >= 4");
  Sample s;
  s.y.resize(n);
  s.x.resize(n);
  s.w.resize(n);
  const double nu1 = dgp.nu[0];
  for (int i = 0; i < n; ++i) {
    const double w = stream.uniform();
    const double v = stream.uniform();
    const double eta = stream.normal();
    const std::vector<double> a = cdf_coeffs(dgp, w);
    const double x = invert_cdf(a, v);
    const double u = dgp.rho_endog * (kSq2 * std::cos(M_PI * x) - nu1 * kSq2 * std::cos(M_PI * w)) +
                     dgp.sigma_eta * eta;
    s.w[i] = w;
    s.x[i] = x;
    s.y[i] = h0_eval(dgp, x) + u;
  }
  return s;
}

Sample draw_sample(const DgpSpec& dgp, int n, std::uint64_t seed) {
  RngStream stream(seed, 0, 0);
  return draw_sample(dgp, n, stream);
}

double true_functional(const DgpSpec& dgp) {
  double acc = 0.0;
  for (double c : dgp.h_coeffs) acc += c * c;
  return acc;
}

double true_functional_quadrature(const DgpSpec& dgp, const WeightFn& mu) {
  return integrate([&](double x) {
    const double h = h0_eval(dgp, x);
    return h * h * mu(x);
  }, default_subintervals(dgp.j_h));
}

double true_tau(const DgpSpec& dgp, int j) {
  if (j < 1 || j > dgp.j_op)
    throw InvalidInputError("true_tau: J must be in [1, j_op]");
  return 1.0 / dgp.nu[static_cast<std::size_t>(j - 1)];
}

ExogeneityReport check_exogeneity(const DgpSpec& dgp, int n, std::uint64_t seed) {
  const Sample s = draw_sample(dgp, n, seed);
  Eigen::VectorXd u(n);
  for (int i = 0; i < n; ++i) u[i] = s.y[i] - h0_eval(dgp, s.x[i]);

  const int k = 4;
  BasisSpec bspec{BasisFamily::Cosine, k};
  Eigen::MatrixXd z(n, k + 1);
  z.col(0).setOnes();
  z.rightCols(k) = design_matrix(bspec, s.w);

  const Eigen::MatrixXd ztz = z.transpose() * z;
  const Eigen::VectorXd coef = ztz.ldlt().solve(z.transpose() * u);
  const Eigen::VectorXd resid = u - z * coef;
  const double s2 = resid.squaredNorm() / static_cast<double>(n - k - 1);
  const Eigen::MatrixXd cov = s2 * ztz.inverse();

  ExogeneityReport rep;
  rep.coef = coef;
  rep.tstat.resize(k + 1);
  for (int i = 0; i <= k; ++i) {
    const double se = std::sqrt(cov(i, i));
    rep.tstat[i] = se > 0.0 ? coef[i] / se : 0.0;  // U identically zero
  }
  rep.exogenous_ok = rep.tstat.cwiseAbs().maxCoeff() <= 3.0;

  Eigen::VectorXd phi1x(n);
  for (int i = 0; i < n; ++i) phi1x[i] = kSq2 * std::cos(M_PI * s.x[i]);
  const double mu_u = u.mean(), mu_p = phi1x.mean();
  const double su = std::sqrt((u.array() - mu_u).square().mean());
  const double sp = std::sqrt((phi1x.array() - mu_p).square().mean());
  if (su > 0.0 && sp > 0.0) {
    rep.corr_u_phi1x = ((u.array() - mu_u) * (phi1x.array() - mu_p)).mean() / (su * sp);
    rep.corr_se = 1.0 / std::sqrt(static_cast<double>(n));
  }
  return rep;
}

}  // namespace npivq
