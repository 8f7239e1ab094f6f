#include "npivq/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

#include "npivq/errors.hpp"
#include "npivq/illposedness.hpp"

namespace npivq {

const char* to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::LooOracleJ: return "loo_oracle_j";
    case EstimatorKind::LooOptimalJ: return "loo_optimal_j";
    case EstimatorKind::Plugin: return "plugin";
    case EstimatorKind::Adaptive: return "adaptive";
  }
  return "?";
}

EstimatorKind estimator_from_string(const std::string& name) {
  if (name == "loo_oracle_j") return EstimatorKind::LooOracleJ;
  if (name == "loo_optimal_j") return EstimatorKind::LooOptimalJ;
  if (name == "plugin") return EstimatorKind::Plugin;
  if (name == "adaptive") return EstimatorKind::Adaptive;
  throw InvalidInputError("unknown estimator: " + name);
}

void ExperimentConfig::validate() const {
  if (replications < 2) throw InvalidInputError("experiment: need replications >= 2");
  if (sample_sizes.empty()) throw InvalidInputError("experiment: no sample sizes");
  for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
    if (sample_sizes[i] < 16) throw InvalidInputError("experiment: sample sizes must be >= 16");
    if (i > 0 && sample_sizes[i] <= sample_sizes[i - 1])
      throw InvalidInputError("experiment: sample sizes must be ascending");
  }
  if (estimators.empty()) throw InvalidInputError("experiment: no estimators selected");
  if (!(c0 >= 0.0)) throw InvalidInputError("experiment: c0 must be >= 0");
  if (!(c_big > 0.0)) throw InvalidInputError("experiment: C0 must be > 0");
  if (!(scale > 0.0)) throw InvalidInputError("experiment: scale must be > 0");
  if (threads < 0) throw InvalidInputError("experiment: threads must be >= 0");
}

RateSpec ExperimentConfig::rate_spec() const {
  RateSpec r;
  r.regime = dgp.regime;
  r.p = dgp.p;
  r.zeta = dgp.zeta;
  r.d = 1;
  r.ellipsoid = dgp.ellipsoid_bound;
  return r;
}

namespace {

bool needs(const ExperimentConfig& config, EstimatorKind kind) {
  return std::find(config.estimators.begin(), config.estimators.end(), kind) !=
         config.estimators.end();
}

int oracle_dimension(const ExperimentConfig& config, int n) {
  std::vector<double> taus(static_cast<std::size_t>(config.dgp.j_op));
  for (int j = 1; j <= config.dgp.j_op; ++j)
    taus[static_cast<std::size_t>(j - 1)] = true_tau(config.dgp, j);
  return oracle_j0(config.rate_spec(), taus, n, config.c_big);
}

struct FixedJCache {
  // J per sample size for the oracle / optimal / plugin paths.
  std::vector<int> oracle_j;
  std::vector<int> optimal;
};

ResultRow run_one(const ExperimentConfig& config, const Sample& sample, int n, int rep,
                  EstimatorKind kind, int fixed_j) {
  ResultRow row;
  row.n = n;
  row.rep = rep;
  row.estimator = kind;
  row.status = "ok";
  const WeightFn mu = WeightFn::uniform();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (kind == EstimatorKind::Adaptive) {
      const AdaptiveResult res = adaptive_estimate(sample, config.family, mu, config.c0);
      row.estimate = res.f_hat;
      row.j_used = res.j_hat;
      for (const CandidateInfo& c : res.candidate_set.candidates)
        if (c.j == res.j_hat) row.tau_hat = c.ill.tau_hat;
    } else {
      const BasisSpec spec{config.family, fixed_j};
      const SieveDesign design = build_design(sample, spec, spec, mu);
      row.j_used = fixed_j;
      if (kind == EstimatorKind::Plugin) {
        const SieveFit fit = fit_npiv(sample, design);
        row.estimate = quad_plugin(fit, design);
      } else {
        row.estimate = quad_loo(sample, design);
      }
      try {
        row.tau_hat = tau_hat(design).tau_hat;
      } catch (const std::exception&) {
        row.tau_hat = std::numeric_limits<double>::quiet_NaN();
      }
    }
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
    row.estimate = std::numeric_limits<double>::quiet_NaN();
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
  return row;
}

}  // namespace

ResultsTable run_experiment(const ExperimentConfig& config) {
  config.validate();
  const RateSpec rate = config.rate_spec();

  FixedJCache cache;
  cache.oracle_j.resize(config.sample_sizes.size(), 0);
  cache.optimal.resize(config.sample_sizes.size(), 0);
  for (std::size_t i = 0; i < config.sample_sizes.size(); ++i) {
    const int n = config.sample_sizes[i];
    if (needs(config, EstimatorKind::LooOracleJ)) cache.oracle_j[i] = oracle_dimension(config, n);
    if (needs(config, EstimatorKind::LooOptimalJ) || needs(config, EstimatorKind::Plugin))
      cache.optimal[i] = optimal_j(rate, n, config.scale);
  }

  const int R = config.replications;
  const std::size_t n_sizes = config.sample_sizes.size();
  const std::size_t n_est = config.estimators.size();
  const std::size_t tasks = n_sizes * static_cast<std::size_t>(R);

  ResultsTable table;
  table.rows.resize(tasks * n_est);

  // Tasks are independent; each one owns a counter-based stream keyed by
  // (seed, n, rep) and writes to a preassigned slot, so the table never
  // depends on scheduling.
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks) return;
      const std::size_t size_idx = t / static_cast<std::size_t>(R);
      const int rep = static_cast<int>(t % static_cast<std::size_t>(R));
      const int n = config.sample_sizes[size_idx];
      RngStream stream(config.master_seed, static_cast<std::uint32_t>(n),
                       static_cast<std::uint32_t>(rep));
      Sample sample;
      bool draw_ok = true;
      std::string draw_err;
      try {
        sample = draw_sample(config.dgp, n, stream);
      } catch (const std::exception& e) {
        draw_ok = false;
        draw_err = e.what();
      }
      for (std::size_t e = 0; e < n_est; ++e) {
        const EstimatorKind kind = config.estimators[e];
        ResultRow row;
        if (!draw_ok) {
          row.n = n;
          row.rep = rep;
          row.estimator = kind;
          row.estimate = std::numeric_limits<double>::quiet_NaN();
          row.status = "error: draw failed: " + draw_err;
        } else {
          const int fixed_j = kind == EstimatorKind::LooOracleJ ? cache.oracle_j[size_idx]
                                                                : cache.optimal[size_idx];
          row = run_one(config, sample, n, rep, kind, fixed_j);
        }
        table.rows[t * n_est + e] = std::move(row);
      }
    }
  };

  int n_threads = config.threads > 0 ? config.threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  return table;
}

std::pair<double, double> rate_slope(const std::vector<double>& ns,
                                     const std::vector<double>& rmse) {
  if (ns.size() != rmse.size()) throw InvalidInputError("rate_slope: length mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (rmse[i] > 0.0) {
      lx.push_back(std::log(ns[i]));
      ly.push_back(std::log(rmse[i]));
    }
  }
  const std::size_t m = lx.size();
  if (m < 3) throw InvalidInputError("rate_slope: need >= 3 positive-RMSE points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double fit = my + slope * (lx[i] - mx);
    rss += (ly[i] - fit) * (ly[i] - fit);
  }
  const double se = m > 2 ? std::sqrt(rss / static_cast<double>(m - 2) / sxx) : 0.0;
  return {slope, se};
}

double theorem31_check(const ResultsTable& table, const ExperimentConfig& config) {
  const double f0 = true_functional(config.dgp);
  std::map<std::pair<int, int>, std::pair<double, double>> pairs;  // (n,rep) -> (adaptive, oracle)
  std::map<std::pair<int, int>, int> seen;
  for (const ResultRow& row : table.rows) {
    if (row.status != "ok") continue;
    const auto key = std::make_pair(row.n, row.rep);
    if (row.estimator == EstimatorKind::Adaptive) {
      pairs[key].first = row.estimate;
      seen[key] |= 1;
    } else if (row.estimator == EstimatorKind::LooOracleJ) {
      pairs[key].second = row.estimate;
      seen[key] |= 2;
    }
  }
  std::map<int, int> j0_by_n;
  int total = 0, pass = 0;
  for (const auto& [key, flags] : seen) {
    if (flags != 3) continue;
    const int n = key.first;
    if (!j0_by_n.count(n)) j0_by_n[n] = oracle_dimension(config, n);
    const int j0 = j0_by_n[n];
    const double tau0 = true_tau(config.dgp, j0);
    const double rhs = 3.0 * config.c0 * tau0 * tau0 *
                           std::sqrt(static_cast<double>(j0) * std::log(static_cast<double>(n))) /
                           static_cast<double>(n) +
                       std::abs(pairs[key].second - f0);
    ++total;
    if (std::abs(pairs[key].first - f0) <= rhs) ++pass;
  }
  if (total == 0) throw InvalidInputError("theorem31_check: no (adaptive, oracle) pairs in table");
  return static_cast<double>(pass) / static_cast<double>(total);
}

RateReport summarize(const ResultsTable& table, const ExperimentConfig& config) {
  RateReport report;
  report.true_value = true_functional(config.dgp);
  const RateSpec rate = config.rate_spec();
  if (rate.regime == Regime::Mild) {
    report.theoretical_exponent = rate.p > rate.zeta + rate.d / 4.0
                                      ? 0.5
                                      : 4.0 * rate.p / (4.0 * (rate.p + rate.zeta) + rate.d);
  } else {
    report.theoretical_exponent = 2.0 * rate.p / rate.zeta;  // power of log n
  }
  report.minimax_rate_largest_n = minimax_rate(rate, config.sample_sizes.back());

  std::size_t failures = 0;
  std::map<std::pair<int, int>, std::vector<double>> cell_errors;  // (estimator, n) -> estimates
  std::map<std::pair<int, int>, int> cell_fail;
  for (const ResultRow& row : table.rows) {
    const auto key = std::make_pair(static_cast<int>(row.estimator), row.n);
    if (row.status == "ok") {
      cell_errors[key].push_back(row.estimate);
    } else {
      ++cell_fail[key];
      ++failures;
    }
  }
  report.failure_rate = table.rows.empty()
                            ? 0.0
                            : static_cast<double>(failures) / static_cast<double>(table.rows.size());

  for (const EstimatorKind kind : config.estimators) {
    EstimatorRates er;
    std::vector<double> ns, rmses;
    for (const int n : config.sample_sizes) {
      const auto key = std::make_pair(static_cast<int>(kind), n);
      SummaryCell cell;
      cell.n = n;
      cell.estimator = kind;
      cell.n_fail = cell_fail.count(key) ? cell_fail[key] : 0;
      const auto it = cell_errors.find(key);
      if (it != cell_errors.end() && !it->second.empty()) {
        const std::vector<double>& est = it->second;
        cell.n_ok = static_cast<int>(est.size());
        double mean = 0.0, mse = 0.0;
        for (double v : est) {
          mean += v;
          mse += (v - report.true_value) * (v - report.true_value);
        }
        mean /= cell.n_ok;
        mse /= cell.n_ok;
        cell.bias = mean - report.true_value;
        cell.rmse = std::sqrt(mse);
        cell.variance = mse - cell.bias * cell.bias;
        ns.push_back(static_cast<double>(n));
        rmses.push_back(cell.rmse);
      }
      er.cells.push_back(cell);
    }
    if (ns.size() >= 3) {
      bool all_positive = true;
      for (double r : rmses) all_positive = all_positive && r > 0.0;
      if (all_positive) {
        const auto [slope, se] = rate_slope(ns, rmses);
        er.slope = slope;
        er.stderr_ = se;
      }
    }
    report.per_estimator[kind] = std::move(er);
  }

  const bool have_pair = needs(config, EstimatorKind::Adaptive) &&
                         needs(config, EstimatorKind::LooOracleJ);
  if (have_pair) report.theorem31_pass_rate = theorem31_check(table, config);
  return report;
}

std::vector<ComparisonRow> compare_estimators(const ResultsTable& table, double true_value,
                                              EstimatorKind a, EstimatorKind b) {
  std::map<int, std::map<int, std::pair<double, double>>> by_n;  // n -> rep -> (a, b)
  std::map<int, std::map<int, int>> flags;
  for (const ResultRow& row : table.rows) {
    if (row.status != "ok") continue;
    if (row.estimator == a) {
      by_n[row.n][row.rep].first = row.estimate;
      flags[row.n][row.rep] |= 1;
    }
    if (row.estimator == b) {
      by_n[row.n][row.rep].second = row.estimate;
      flags[row.n][row.rep] |= 2;
    }
  }
  std::vector<ComparisonRow> out;
  for (const auto& [n, reps] : by_n) {
    ComparisonRow row;
    row.n = n;
    double mse_a = 0.0, mse_b = 0.0, diff = 0.0;
    int count = 0;
    for (const auto& [rep, vals] : reps) {
      if (flags[n][rep] != 3) continue;
      mse_a += (vals.first - true_value) * (vals.first - true_value);
      mse_b += (vals.second - true_value) * (vals.second - true_value);
      diff += vals.first - vals.second;
      ++count;
    }
    if (count == 0) continue;
    row.rmse_a = std::sqrt(mse_a / count);
    row.rmse_b = std::sqrt(mse_b / count);
    row.rmse_ratio = row.rmse_b > 0.0 ? row.rmse_a / row.rmse_b
                                      : (row.rmse_a == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
    row.mean_paired_diff = diff / count;
    out.push_back(row);
  }
  return out;
}

void write_results_csv(const ResultsTable& table, std::ostream& os) {
  os << "n,rep,estimator,estimate,j_used,tau_hat,wall_ms,status\n";
  char buf[64];
  for (const ResultRow& row : table.rows) {
    os << row.n << ',' << row.rep << ',' << to_string(row.estimator) << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", row.estimate);
    os << buf << ',' << row.j_used << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", row.tau_hat);
    os << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.3f", row.wall_ms);
    os << buf << ',' << row.status << '\n';
  }
}

}  // namespace npivq
