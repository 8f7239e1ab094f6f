#pragma once

#include <Eigen/Core>
#include <vector>

#include "npivq/basis.hpp"
#include "npivq/dgp.hpp"
#include "npivq/estimators.hpp"
#include "npivq/illposedness.hpp"
#include "npivq/sample.hpp"

namespace npivq {

/// Smoothness / ill-posedness profile for the rate formulas.
struct RateSpec {
  Regime regime = Regime::Mild;
  double p = 1.0;     // smoothness
  double zeta = 1.0;  // ill-posedness exponent
  int d = 1;          // regressor dimension (fixed to 1 here)
  double ellipsoid = 10.0;

  void validate() const;
};

/// J_min = max(1, floor(log log n)); throws for n <= e.
int j_min(int n);

/// Hard cap floor(n^{1/2.1}) that guarantees the J_max scan terminates.
int j_cap(int n);

struct CandidateInfo {
  int j = 0;
  double f_loo = 0.0;
  IllposednessReport ill;
  bool accepted = false;
};

struct CandidateSet {
  int j_min = 0;
  int j_max_hat = 0;
  bool overflow_truncated = false;  // tau_hat overflow ended the scan early
  bool hit_cap = false;             // scan reached floor(n^{1/2.1})
  int n = 0;
  std::vector<CandidateInfo> candidates;  // ascending J = j_min..j_max_hat
};

struct AdaptiveResult {
  int j_hat = 0;
  double f_hat = 0.0;
  double c0 = 0.0;
  CandidateSet candidate_set;
  Eigen::MatrixXd diff;       // |f_J - f_J'| over candidate pairs
  Eigen::MatrixXd threshold;  // c0 (V(J) + V(J'))
};

/// First J > J_min with tau_hat_J [zeta(J)]^2 sqrt(l(J) log n / n) >= 1, where
/// l(J) = max(0.1 log log J, 0.01); the scan starts at max(J_min+1, 3) and a
/// tau_hat overflow or the hard cap ends it.
int j_max_hat(const Sample& sample, BasisFamily family, const WeightFn& mu,
              const TolerancePolicy& tol = {});

/// All candidates J in [J_min, J_max_hat] with their f_J and V(J).
CandidateSet build_candidates(const Sample& sample, BasisFamily family, const WeightFn& mu,
                              const TolerancePolicy& tol = {});

/// Lepski rule: smallest J whose estimate is within c0 (V(J)+V(J')) of every
/// larger candidate. J_max_hat always qualifies (vacuous comparison set).
AdaptiveResult select_j(const CandidateSet& set, double c0);

/// Oracle dimension: smallest J with J^{-2p/d} <= C0 tau_J^2 sqrt(J log n)/n.
/// Throws if no J in 1..tau_seq.size() satisfies it.
int oracle_j0(const RateSpec& rate, const std::vector<double>& tau_seq, int n, double c_big);

/// Rate-optimal dimension: round(scale * n^{2d/(4(p+zeta)+d)}) in the mild
/// case, round(scale * (log n - (4p+d)/(2 zeta) log log n)^{d/zeta}) in the
/// severe case; clamped to >= 1.
int optimal_j(const RateSpec& rate, int n, double scale);

/// Minimax lower-bound rate r_n.
double minimax_rate(const RateSpec& rate, int n);

/// Full pipeline: build candidates, apply select_j.
AdaptiveResult adaptive_estimate(const Sample& sample, BasisFamily family, const WeightFn& mu,
                                 double c0, const TolerancePolicy& tol = {});

}  // namespace npivq
