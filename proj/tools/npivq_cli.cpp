#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "npivq/config.hpp"
#include "npivq/csv.hpp"
#include "npivq/errors.hpp"
#include "npivq/experiment.hpp"
#include "npivq/illposedness.hpp"
#include "npivq/lepski.hpp"
#include "npivq/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace npivq;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

WeightFn parse_weight(const std::string& arg) {
  if (arg == "uniform") return WeightFn::uniform();
  if (arg.rfind("file:", 0) == 0) {
    const std::string path = arg.substr(5);
    std::ifstream in(path);
    if (!in) throw InvalidInputError("weight: cannot open " + path);
    std::vector<double> grid, values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line == "x,w") continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ss(line);
      double x = 0.0, v = 0.0;
      if (!(ss >> x >> v))
        throw InvalidInputError("weight file line " + std::to_string(lineno) +
                                ": expected 'x,value'");
      grid.push_back(x);
      values.push_back(v);
    }
    return WeightFn::tabulated(std::move(grid), std::move(values));
  }
  throw InvalidInputError("weight: expected 'uniform' or 'file:<path>', got " + arg);
}

json base_output(const std::string& command, std::uint64_t seed) {
  json out;
  out["tool"] = "npivq";
  out["version"] = kVersion;
  out["command"] = command;
  out["master_seed"] = seed;
  return out;
}

void emit(const json& out, const std::string& path) {
  if (path.empty()) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::ofstream os(path);
    if (!os) throw InvalidInputError("cannot open output file " + path);
    os << out.dump(2) << "\n";
  }
}

json dgp_json(const DgpSpec& dgp) {
  return json{{"regime", to_string(dgp.regime)}, {"zeta", dgp.zeta},
              {"p", dgp.p},                      {"c_nu", dgp.nu_scale},
              {"c_h", dgp.h_scale},              {"sigma_eta", dgp.sigma_eta},
              {"rho_endog", dgp.rho_endog},      {"j_op", dgp.j_op},
              {"j_h", dgp.j_h},                  {"ellipsoid", dgp.ellipsoid_bound}};
}

json experiment_json(const ExperimentConfig& config) {
  json est = json::array();
  for (const EstimatorKind k : config.estimators) est.push_back(to_string(k));
  return json{{"dgp", dgp_json(config.dgp)},
              {"sample_sizes", config.sample_sizes},
              {"replications", config.replications},
              {"master_seed", config.master_seed},
              {"estimators", est},
              {"c0", config.c0},
              {"C0", config.c_big},
              {"scale", config.scale},
              {"family", to_string(config.family)},
              {"threads", config.threads}};
}

int cmd_estimate(const std::string& data_path, const std::string& basis, int j, int k,
                 const std::string& weight_arg, std::uint64_t seed, const std::string& out_path) {
  const DataSet data = read_data_csv(data_path);
  const WeightFn mu = parse_weight(weight_arg);
  const BasisFamily family = basis_family_from_string(basis);
  if (k <= 0) k = j;
  const SieveDesign design =
      build_design(data.sample, BasisSpec{family, j}, BasisSpec{family, k}, mu);

  json out = base_output("estimate", seed);
  out["config"] = {{"data", data_path}, {"basis", basis}, {"j", j},
                   {"k", k},            {"weight", weight_arg}};
  out["n"] = static_cast<int>(data.sample.size());
  out["j"] = j;
  out["k"] = k;
  out["f_loo"] = quad_loo(data.sample, design);
  const SieveFit fit = fit_npiv(data.sample, design);
  out["f_plugin"] = quad_plugin(fit, design);
  out["rank_deficient"] = fit.rank_deficient;
  try {
    const IllposednessReport rep = tau_hat(design);
    out["tau_hat"] = rep.tau_hat;
    out["s_hat"] = rep.s_hat;
    out["v_hat"] = rep.v_hat;
  } catch (const std::exception& e) {
    out["tau_hat"] = nullptr;
    out["tau_hat_error"] = e.what();
  }
  out["rescaling"] = {{"x", {{"offset", data.x_map.offset}, {"scale", data.x_map.scale}}},
                      {"w", {{"offset", data.w_map.offset}, {"scale", data.w_map.scale}}}};
  out["tolerances"] = {{"rel_rank_tol", TolerancePolicy{}.rel_rank_tol}};
  emit(out, out_path);
  return kExitOk;
}

int cmd_adapt(const std::string& data_path, const std::string& basis, double c0,
              const std::string& weight_arg, std::uint64_t seed, const std::string& out_path) {
  const DataSet data = read_data_csv(data_path);
  const WeightFn mu = parse_weight(weight_arg);
  const BasisFamily family = basis_family_from_string(basis);
  const AdaptiveResult res = adaptive_estimate(data.sample, family, mu, c0);

  json out = base_output("adapt", seed);
  out["config"] = {{"data", data_path}, {"basis", basis}, {"c0", c0}, {"weight", weight_arg}};
  out["n"] = static_cast<int>(data.sample.size());
  out["j_hat"] = res.j_hat;
  out["f_hat"] = res.f_hat;
  out["j_min"] = res.candidate_set.j_min;
  out["j_max_hat"] = res.candidate_set.j_max_hat;
  out["hit_cap"] = res.candidate_set.hit_cap;
  out["overflow_truncated"] = res.candidate_set.overflow_truncated;
  json cands = json::array();
  for (const CandidateInfo& c : res.candidate_set.candidates) {
    cands.push_back({{"j", c.j},
                     {"f_loo", c.f_loo},
                     {"tau_hat", c.ill.tau_hat},
                     {"s_hat", c.ill.s_hat},
                     {"v_hat", c.ill.v_hat},
                     {"accepted", c.accepted}});
  }
  out["candidates"] = cands;
  json diffs = json::array(), thresholds = json::array();
  for (Eigen::Index a = 0; a < res.diff.rows(); ++a) {
    json dr = json::array(), tr = json::array();
    for (Eigen::Index b = 0; b < res.diff.cols(); ++b) {
      dr.push_back(res.diff(a, b));
      tr.push_back(res.threshold(a, b));
    }
    diffs.push_back(dr);
    thresholds.push_back(tr);
  }
  out["pairwise_diff"] = diffs;
  out["pairwise_threshold"] = thresholds;
  out["rescaling"] = {{"x", {{"offset", data.x_map.offset}, {"scale", data.x_map.scale}}},
                      {"w", {{"offset", data.w_map.offset}, {"scale", data.w_map.scale}}}};
  out["tolerances"] = {{"rel_rank_tol", TolerancePolicy{}.rel_rank_tol}};
  emit(out, out_path);
  return kExitOk;
}

ExperimentConfig load_experiment(const std::string& config_path, std::optional<double> c0,
                                 std::optional<double> c_big, std::optional<std::uint64_t> seed,
                                 std::optional<int> threads) {
  ExperimentConfig config = experiment_config_from_file(config_path);
  if (c0) config.c0 = *c0;
  if (c_big) config.c_big = *c_big;
  if (seed) config.master_seed = *seed;
  if (threads) config.threads = *threads;
  config.validate();
  return config;
}

void write_raw_csv(const ResultsTable& table, const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw InvalidInputError("cannot open " + path.string());
  write_results_csv(table, os);
}

json rates_json(const RateReport& report, const ExperimentConfig& config) {
  json out = base_output("rates", config.master_seed);
  out["config"] = experiment_json(config);
  out["true_value"] = report.true_value;
  out["theoretical_exponent"] = report.theoretical_exponent;
  out["minimax_rate_largest_n"] = report.minimax_rate_largest_n;
  out["failure_rate"] = report.failure_rate;
  if (report.theorem31_pass_rate >= 0.0)
    out["theorem31_pass_rate"] = report.theorem31_pass_rate;
  else
    out["theorem31_pass_rate"] = nullptr;
  json ests;
  for (const auto& [kind, rates] : report.per_estimator) {
    json cells = json::array();
    for (const SummaryCell& c : rates.cells) {
      cells.push_back({{"n", c.n},
                       {"rmse", c.rmse},
                       {"bias", c.bias},
                       {"variance", c.variance},
                       {"n_ok", c.n_ok},
                       {"n_fail", c.n_fail}});
    }
    ests[to_string(kind)] = {{"slope", rates.slope}, {"stderr", rates.stderr_}, {"cells", cells}};
  }
  out["estimators"] = ests;
  return out;
}

int cmd_simulate(const ExperimentConfig& config, const std::string& out_dir) {
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  fs::create_directories(dir);
  const ResultsTable table = run_experiment(config);
  write_raw_csv(table, dir / "results.csv");
  json meta = base_output("simulate", config.master_seed);
  meta["config"] = experiment_json(config);
  meta["rows"] = table.rows.size();
  std::ofstream os(dir / "run.json");
  os << meta.dump(2) << "\n";
  std::cout << "wrote " << (dir / "results.csv").string() << " (" << table.rows.size()
            << " rows)\n";
  return kExitOk;
}

int cmd_rates(const ExperimentConfig& config, const std::string& out_dir) {
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  fs::create_directories(dir);
  const ResultsTable table = run_experiment(config);
  write_raw_csv(table, dir / "results.csv");
  const RateReport report = summarize(table, config);
  std::ofstream os(dir / "rates.json");
  os << rates_json(report, config).dump(2) << "\n";
  for (const auto& [kind, rates] : report.per_estimator) {
    std::ofstream plot(dir / (std::string("plot_") + to_string(kind) + ".csv"));
    plot << "n,rmse\n";
    for (const SummaryCell& c : rates.cells) {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "%.17g", c.rmse);
      plot << c.n << ',' << buf << '\n';
    }
  }
  std::cout << "wrote " << (dir / "rates.json").string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic-functional NPIV estimation: leave-one-out sieve estimator, "
               "data-driven ill-posedness, Lepski dimension selection, Monte Carlo harness"};
  app.require_subcommand(1);

  std::string data_path, config_path, out_path, basis = "cosine", weight = "uniform";
  int j = 4, k = 0;
  double c0 = 0.5;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double c_big = 1.0;
  bool c0_given = false, c_big_given = false;
  int threads = -1;

  CLI::App* est = app.add_subcommand("estimate", "Estimate f(h0) from a y,x,w CSV");
  est->add_option("--data", data_path, "input CSV with header y,x,w")->required();
  est->add_option("--basis", basis, "cosine|bspline|legendre");
  est->add_option("--j", j, "sieve dimension J");
  est->add_option("--k", k, "instrument dimension K (default J)");
  est->add_option("--weight", weight, "uniform | file:<path>");
  est->add_option("--seed", seed, "seed recorded in the output");
  est->add_option("--out", out_path, "output JSON path (default stdout)");

  CLI::App* adp = app.add_subcommand("adapt", "Lepski-selected estimate from a y,x,w CSV");
  adp->add_option("--data", data_path, "input CSV with header y,x,w")->required();
  adp->add_option("--basis", basis, "cosine|bspline|legendre");
  adp->add_option("--c0", c0, "Lepski threshold constant");
  adp->add_option("--weight", weight, "uniform | file:<path>");
  adp->add_option("--seed", seed, "seed recorded in the output");
  adp->add_option("--out", out_path, "output JSON path (default stdout)");

  CLI::App* sim = app.add_subcommand("simulate", "Run a configured Monte Carlo experiment");
  sim->add_option("--config", config_path, "experiment config file")->required();
  sim->add_option("--out", out_path, "output directory (default .)");
  sim->add_option("--seed", seed, "override master seed")->each([&](const std::string&) {
    seed_given = true;
  });
  sim->add_option("--threads", threads, "worker threads (0 = hardware)");

  CLI::App* rat = app.add_subcommand("rates", "Monte Carlo run plus rate-slope report");
  rat->add_option("--config", config_path, "experiment config file")->required();
  rat->add_option("--out", out_path, "output directory (default .)");
  rat->add_option("--c0", c0, "override Lepski c0")->each([&](const std::string&) {
    c0_given = true;
  });
  rat->add_option("--C0", c_big, "override oracle C0")->each([&](const std::string&) {
    c_big_given = true;
  });
  rat->add_option("--seed", seed, "override master seed")->each([&](const std::string&) {
    seed_given = true;
  });
  rat->add_option("--threads", threads, "worker threads (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (est->parsed()) return cmd_estimate(data_path, basis, j, k, weight, seed, out_path);
    if (adp->parsed()) return cmd_adapt(data_path, basis, c0, weight, seed, out_path);
    const auto opt_c0 = c0_given ? std::optional<double>(c0) : std::nullopt;
    const auto opt_cb = c_big_given ? std::optional<double>(c_big) : std::nullopt;
    const auto opt_seed = seed_given ? std::optional<std::uint64_t>(seed) : std::nullopt;
    const auto opt_threads = threads >= 0 ? std::optional<int>(threads) : std::nullopt;
    const ExperimentConfig config =
        load_experiment(config_path, opt_c0, opt_cb, opt_seed, opt_threads);
    if (sim->parsed()) return cmd_simulate(config, out_path);
    return cmd_rates(config, out_path);
  } catch (const InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
