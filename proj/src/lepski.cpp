#include "npivq/lepski.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "npivq/errors.hpp"

namespace npivq {

void RateSpec::validate() const {
  if (!(p > 0.0)) throw InvalidInputError("rate: p must be > 0");
  if (!(zeta > 0.0)) throw InvalidInputError("rate: zeta must be > 0");
  if (d < 1) throw InvalidInputError("rate: d must be >= 1");
  if (!(ellipsoid > 0.0)) throw InvalidInputError("rate: ellipsoid radius must be > 0");
}

int j_min(int n) {
  if (n <= 2) throw InvalidInputError("j_min: need n > e");
  const double ll = std::log(std::log(static_cast<double>(n)));
  return std::max(1, static_cast<int>(std::floor(ll)));
}

int j_cap(int n) {
  return std::max(1, static_cast<int>(std::floor(std::pow(static_cast<double>(n), 1.0 / 2.1))));
}

namespace {

double ell_of(int j) {
  // l(J) = 0.1 log log J is negative or undefined for J <= 2; floor at 0.01.
  if (j < 3) return 0.01;
  return std::max(0.1 * std::log(std::log(static_cast<double>(j))), 0.01);
}

struct ScanOutcome {
  CandidateSet set;
  int scan_jmax = 0;  // J the scan stopped at (the overflow J when flagged)
};

ScanOutcome scan_candidates(const Sample& sample, BasisFamily family, const WeightFn& mu,
                            const TolerancePolicy& tol) {
  sample.validate();
  const int n = static_cast<int>(sample.size());
  if (n < 16) throw InvalidInputError("adaptive selection: need n >= 16");

  CandidateSet set;
  set.n = n;
  set.j_min = j_min(n);
  if (family == BasisFamily::BSpline)
    set.j_min = std::max(set.j_min, BasisSpec{}.bspline_order);
  const int cap = std::max(j_cap(n), set.j_min);
  const int j_start = std::max(set.j_min + 1, 3);
  const double log_n = std::log(static_cast<double>(n));

  set.hit_cap = true;
  int stop_j = cap;

  // One ascending pass: candidates begin at J_min, the threshold scan kicks in
  // at J_start. A tau_hat overflow at J ends the feasible set at J - 1.
  for (int j = set.j_min; j <= cap; ++j) {
    CandidateInfo info;
    info.j = j;
    try {
      const SieveDesign design =
          build_design(sample, BasisSpec{family, j}, BasisSpec{family, j}, mu);
      info.ill = tau_hat(design, tol);
      info.f_loo = quad_loo(sample, design, tol);
    } catch (const NumericError&) {
      set.overflow_truncated = true;
      set.hit_cap = false;
      stop_j = j;
      break;
    }
    set.candidates.push_back(std::move(info));
    if (j >= j_start) {
      const double zj = zeta_growth(BasisSpec{family, j});
      const double threshold =
          set.candidates.back().ill.tau_hat * zj * zj * std::sqrt(ell_of(j) * log_n / n);
      if (threshold >= 1.0) {
        set.hit_cap = false;
        stop_j = j;
        break;
      }
    }
  }
  if (set.candidates.empty())
    throw NumericError("adaptive selection: no feasible sieve dimension (tau_hat overflow at J=" +
                       std::to_string(stop_j) + ")");
  set.j_max_hat = set.candidates.back().j;
  ScanOutcome out;
  out.scan_jmax = set.overflow_truncated ? stop_j : set.j_max_hat;
  out.set = std::move(set);
  return out;
}

}  // namespace

int j_max_hat(const Sample& sample, BasisFamily family, const WeightFn& mu,
              const TolerancePolicy& tol) {
  return scan_candidates(sample, family, mu, tol).scan_jmax;
}

CandidateSet build_candidates(const Sample& sample, BasisFamily family, const WeightFn& mu,
                              const TolerancePolicy& tol) {
  return scan_candidates(sample, family, mu, tol).set;
}

AdaptiveResult select_j(const CandidateSet& set, double c0) {
  if (c0 < 0.0) throw InvalidInputError("select_j: c0 must be >= 0");
  if (set.candidates.empty()) throw InvalidInputError("select_j: empty candidate set");

  AdaptiveResult res;
  res.c0 = c0;
  res.candidate_set = set;
  auto& cands = res.candidate_set.candidates;
  std::sort(cands.begin(), cands.end(),
            [](const CandidateInfo& a, const CandidateInfo& b) { return a.j < b.j; });

  const Eigen::Index m = static_cast<Eigen::Index>(cands.size());
  res.diff.setZero(m, m);
  res.threshold.setZero(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      res.diff(a, b) = std::abs(cands[a].f_loo - cands[b].f_loo);
      res.threshold(a, b) = c0 * (cands[a].ill.v_hat + cands[b].ill.v_hat);
    }
  }

  for (Eigen::Index a = 0; a < m; ++a) {
    bool ok = true;
    for (Eigen::Index b = a + 1; b < m && ok; ++b)
      ok = res.diff(a, b) <= res.threshold(a, b);
    cands[a].accepted = ok;
  }
  res.j_hat = cands.back().j;
  for (Eigen::Index a = 0; a < m; ++a) {
    if (cands[a].accepted) {
      res.j_hat = cands[a].j;
      break;
    }
  }
  for (const CandidateInfo& c : cands)
    if (c.j == res.j_hat) res.f_hat = c.f_loo;
  return res;
}

int oracle_j0(const RateSpec& rate, const std::vector<double>& tau_seq, int n, double c_big) {
  rate.validate();
  if (!(c_big > 0.0)) throw InvalidInputError("oracle_j0: C0 must be > 0");
  if (n < 3) throw InvalidInputError("oracle_j0: need n >= 3");
  if (tau_seq.empty()) throw InvalidInputError("oracle_j0: empty tau sequence");
  for (std::size_t i = 0; i < tau_seq.size(); ++i) {
    if (!(tau_seq[i] > 0.0)) throw InvalidInputError("oracle_j0: tau must be positive");
    if (i > 0 && tau_seq[i] < tau_seq[i - 1])
      throw InvalidInputError("oracle_j0: tau must be nondecreasing");
  }
  const double log_n = std::log(static_cast<double>(n));
  for (std::size_t i = 0; i < tau_seq.size(); ++i) {
    const double j = static_cast<double>(i + 1);
    const double bias2 = std::pow(j, -2.0 * rate.p / rate.d);
    const double v = tau_seq[i] * tau_seq[i] * std::sqrt(j * log_n) / n;
    if (bias2 <= c_big * v) return static_cast<int>(i + 1);
  }
  throw InvalidInputError("oracle_j0: no J in 1.." + std::to_string(tau_seq.size()) +
                          " satisfies the inequality; extend tau_seq");
}

int optimal_j(const RateSpec& rate, int n, double scale) {
  rate.validate();
  if (n < 3) throw InvalidInputError("optimal_j: need n >= 3");
  if (!(scale > 0.0)) throw InvalidInputError("optimal_j: scale must be > 0");
  double raw = 0.0;
  if (rate.regime == Regime::Mild) {
    const double expo = 2.0 * rate.d / (4.0 * (rate.p + rate.zeta) + rate.d);
    raw = std::pow(static_cast<double>(n), expo);
  } else {
    const double log_n = std::log(static_cast<double>(n));
    const double sub = (4.0 * rate.p + rate.d) / (2.0 * rate.zeta) * std::log(log_n);
    if (!(log_n > sub))
      throw InvalidInputError(
          "optimal_j: severe-case precondition log n > ((4p+d)/(2 zeta)) log log n violated");
    raw = std::pow(log_n - sub, rate.d / rate.zeta);
  }
  return std::max(1, static_cast<int>(std::llround(scale * raw)));
}

double minimax_rate(const RateSpec& rate, int n) {
  rate.validate();
  if (n < 3) throw InvalidInputError("minimax_rate: need n >= 3");
  if (rate.regime == Regime::Mild) {
    if (rate.p > rate.zeta + rate.d / 4.0) return std::pow(static_cast<double>(n), -0.5);
    const double expo = 4.0 * rate.p / (4.0 * (rate.p + rate.zeta) + rate.d);
    return std::pow(static_cast<double>(n), -expo);
  }
  return std::pow(std::log(static_cast<double>(n)), -2.0 * rate.p / rate.zeta);
}

AdaptiveResult adaptive_estimate(const Sample& sample, BasisFamily family, const WeightFn& mu,
                                 double c0, const TolerancePolicy& tol) {
  return select_j(build_candidates(sample, family, mu, tol), c0);
}

}  // namespace npivq
