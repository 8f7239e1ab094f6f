#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "npivq/dgp.hpp"
#include "npivq/lepski.hpp"

namespace npivq {

enum class EstimatorKind { LooOracleJ, LooOptimalJ, Plugin, Adaptive };

const char* to_string(EstimatorKind kind);
EstimatorKind estimator_from_string(const std::string& name);

struct ExperimentConfig {
  DgpSpec dgp;
  std::vector<int> sample_sizes;
  int replications = 2;
  std::uint64_t master_seed = 1;
  std::vector<EstimatorKind> estimators;
  double c0 = 0.5;
  double c_big = 1.0;  // C0 in the oracle dimension rule
  double scale = 1.0;  // multiplier inside optimal_j
  BasisFamily family = BasisFamily::Cosine;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
  RateSpec rate_spec() const;
};

struct ResultRow {
  int n = 0;
  int rep = 0;
  EstimatorKind estimator = EstimatorKind::LooOptimalJ;
  double estimate = 0.0;
  int j_used = 0;
  double tau_hat = 0.0;
  double wall_ms = 0.0;
  std::string status;  // "ok" or "error: ..."
};

/// Raw results, sorted by (n, rep, estimator order in the config). Apart from
/// wall_ms (timing metadata) the table is a pure function of the config.
struct ResultsTable {
  std::vector<ResultRow> rows;
};

/// Runs R replications per sample size. Replication r at size n draws from
/// stream (master_seed, n, r); all requested estimators see the same sample.
/// Estimator errors are recorded per row, not thrown.
ResultsTable run_experiment(const ExperimentConfig& config);

struct SummaryCell {
  int n = 0;
  EstimatorKind estimator = EstimatorKind::LooOptimalJ;
  int n_ok = 0;
  int n_fail = 0;
  double rmse = 0.0;
  double bias = 0.0;
  double variance = 0.0;  // population form, so rmse^2 = bias^2 + variance
};

struct EstimatorRates {
  double slope = 0.0;
  double stderr_ = 0.0;
  std::vector<SummaryCell> cells;  // ascending n
};

struct RateReport {
  std::map<EstimatorKind, EstimatorRates> per_estimator;
  double true_value = 0.0;
  double theoretical_exponent = 0.0;  // power of n (mild) or of log n (severe)
  double minimax_rate_largest_n = 0.0;
  double theorem31_pass_rate = -1.0;  // -1 when adaptive+oracle pair not run
  double failure_rate = 0.0;
};

/// OLS of log RMSE on log n; returns (slope, stderr). Zero-RMSE cells are
/// excluded; fewer than 3 surviving points is an error.
std::pair<double, double> rate_slope(const std::vector<double>& ns,
                                     const std::vector<double>& rmse);

/// Fraction of replications with both adaptive and oracle rows where
/// |f_adaptive - f(h0)| <= 3 c0 tau_{J0}^2 sqrt(J0 log n)/n + |f_J0 - f(h0)|,
/// with J0 and tau from the population oracle.
double theorem31_check(const ResultsTable& table, const ExperimentConfig& config);

RateReport summarize(const ResultsTable& table, const ExperimentConfig& config);

struct ComparisonRow {
  int n = 0;
  double rmse_a = 0.0;
  double rmse_b = 0.0;
  double rmse_ratio = 0.0;    // a / b
  double mean_paired_diff = 0.0;
};

/// Paired per-replication comparison of two estimator keys on shared streams.
std::vector<ComparisonRow> compare_estimators(const ResultsTable& table, double true_value,
                                              EstimatorKind a, EstimatorKind b);

/// Raw CSV: n,rep,estimator,estimate,j_used,tau_hat,wall_ms,status.
void write_results_csv(const ResultsTable& table, std::ostream& os);

}  // namespace npivq
