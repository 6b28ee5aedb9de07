// Command-line driver: `mspp lasso|logistic|stability [flags]`.
// Exit codes: 0 success, 1 config error, 2 data error, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mspp/errors.hpp"
#include "mspp/experiments.hpp"

namespace {

using mspp::ExperimentConfig;

mspp::AlgorithmKind parse_algo(const std::string& name) {
  if (name == "mspp") return mspp::AlgorithmKind::mspp;
  if (name == "mspp-tp") return mspp::AlgorithmKind::mspp_tp;
  if (name == "mspp-swor") return mspp::AlgorithmKind::mspp_swor;
  if (name == "msgd") return mspp::AlgorithmKind::msgd;
  throw mspp::config_error("unknown --algo '" + name + "'");
}

// JSON config supplies defaults; command-line flags take precedence because
// CLI11 only writes bound variables for flags that were actually passed.
void apply_json_config(const std::string& path, ExperimentConfig& cfg, std::string& algo_name) {
  std::ifstream in(path);
  if (!in) throw mspp::config_error("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw mspp::config_error("bad JSON config: " + std::string(e.what()));
  }
  const auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).template get<std::decay_t<decltype(field)>>();
  };
  get("p", cfg.p);
  get("n", cfg.n);
  get("t", cfg.T);
  get("n-total", cfg.N);
  get("epochs", cfg.epochs);
  get("k-bar", cfg.k_bar);
  get("sigma", cfg.sigma);
  get("mu", cfg.mu);
  get("rho", cfg.rho);
  get("rho-case2", cfg.rho_case2);
  get("truth-scale", cfg.truth_scale);
  get("step-c", cfg.step_c);
  get("step-rule", cfg.step_rule);
  get("gamma-schedule", cfg.gamma_schedule);
  get("gamma", cfg.gamma_value);
  get("tol-schedule", cfg.tol_schedule);
  get("tol-eps", cfg.tol_eps);
  get("averaging", cfg.averaging);
  get("inner", cfg.inner);
  get("seed", cfg.seed);
  get("replications", cfg.replications);
  get("jobs", cfg.jobs);
  get("tp-m", cfg.tp_m);
  get("l-override", cfg.l_override);
  get("radius", cfg.radius);
  get("perturbations", cfg.n_perturbations);
  get("reps", cfg.sampling_reps);
  get("eval-every", cfg.eval_every);
  get("margin", cfg.margin);
  get("data", cfg.data_path);
  get("out", cfg.out_path);
  get("report", cfg.report_path);
  get("algo", algo_name);
}

void add_common_flags(CLI::App* cmd, ExperimentConfig& cfg, std::string& algo_name,
                      std::string& config_path) {
  cmd->add_option("--config", config_path, "JSON config file; flags override its values");
  cmd->add_option("--algo", algo_name, "mspp | mspp-tp | mspp-swor | msgd");
  cmd->add_option("--p", cfg.p, "feature dimension");
  cmd->add_option("--n", cfg.n, "minibatch size");
  cmd->add_option("--t,-T", cfg.T, "round count");
  cmd->add_option("--n-total", cfg.N, "total sample budget N = n*T");
  cmd->add_option("--sigma", cfg.sigma, "noise standard deviation");
  cmd->add_option("--mu", cfg.mu, "l1 modulus");
  cmd->add_option("--rho", cfg.rho, "schedule scalar rho in (0, 0.5]");
  cmd->add_flag("--rho-case2", cfg.rho_case2,
                "use rho = sqrt(T/(n*lambda)) for the small-T-large-n regime");
  cmd->add_option("--seed", cfg.seed, "base seed");
  cmd->add_option("--replications", cfg.replications, "independent replications");
  cmd->add_option("--jobs", cfg.jobs, "worker pool size for replications");
  cmd->add_option("--gamma-schedule", cfg.gamma_schedule,
                  "linear-qg | linear-qg-offset | constant");
  cmd->add_option("--gamma", cfg.gamma_value, "gamma for the constant schedule");
  cmd->add_option("--tol-schedule", cfg.tol_schedule, "exact | poly-qg | poly-convex | fixed");
  cmd->add_option("--tol-eps", cfg.tol_eps, "tolerance schedule eps");
  cmd->add_option("--averaging", cfg.averaging, "t-weighted | uniform | gamma-weighted");
  cmd->add_option("--inner", cfg.inner, "certified | heuristic | sgd");
  cmd->add_option("--l-override", cfg.l_override, "override the smoothness constant L");
  cmd->add_option("--eval-every", cfg.eval_every, "metric cadence in rounds");
  cmd->add_option("--out", cfg.out_path, "CSV output path (default stdout)");
}

void write_rows(const ExperimentConfig& cfg, const std::vector<mspp::TraceRow>& rows) {
  if (cfg.out_path.empty()) {
    mspp::emit_csv(rows, std::cout);
  } else {
    mspp::emit_csv(rows, cfg.out_path);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minibatch stochastic proximal point experiments"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string algo_name = "mspp";
  std::string config_path;

  CLI::App* lasso = app.add_subcommand("lasso", "synthetic sparse regression with exact oracles");
  add_common_flags(lasso, cfg, algo_name, config_path);
  lasso->add_option("--k-bar", cfg.k_bar, "support size of the true parameter");
  lasso->add_option("--truth-scale", cfg.truth_scale,
                    "std dev of the nonzero entries of the true parameter");
  lasso->add_option("--tp-m", cfg.tp_m, "phase-I sub-minibatch size for mspp-tp");
  lasso->add_option("--step-rule", cfg.step_rule, "msgd step rule: constant | inv-sqrt | inv-t");
  lasso->add_option("--step-c", cfg.step_c, "msgd step constant");
  lasso->add_option("--radius", cfg.radius, "optional ball-domain radius");

  CLI::App* logistic = app.add_subcommand("logistic", "binary prediction, LIBSVM or synthetic");
  add_common_flags(logistic, cfg, algo_name, config_path);
  logistic->add_option("--data", cfg.data_path, "LIBSVM dataset path");
  logistic->add_option("--epochs", cfg.epochs, "passes over the training split");
  logistic->add_option("--margin", cfg.margin, "synthetic separation margin");
  logistic->add_option("--tp-m", cfg.tp_m, "phase-I sub-minibatch size for mspp-tp");
  logistic->add_option("--step-rule", cfg.step_rule, "msgd step rule: constant | inv-sqrt | inv-t");
  logistic->add_option("--step-c", cfg.step_c, "msgd step constant");
  logistic->add_option("--radius", cfg.radius, "optional ball-domain radius");

  CLI::App* stability = app.add_subcommand("stability", "uniform-stability measurement");
  add_common_flags(stability, cfg, algo_name, config_path);
  stability->add_option("--radius", cfg.radius, "ball-domain radius (default 1)");
  stability->add_option("--perturbations", cfg.n_perturbations, "random perturbations to try");
  stability->add_option("--reps", cfg.sampling_reps, "coupled permutation repetitions (swor)");
  stability->add_option("--report", cfg.report_path, "stability summary JSON path");
  stability->add_option("--k-bar", cfg.k_bar, "support size of the true parameter");

  try {
    // First pass picks up --config so the JSON can seed defaults, then the
    // real parse lets explicit flags win.
    for (int i = 1; i + 1 < argc; ++i) {
      if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    }
    if (!config_path.empty()) apply_json_config(config_path, cfg, algo_name);

    app.parse(argc, argv);
    cfg.algorithm = parse_algo(algo_name);

    if (lasso->parsed()) {
      cfg.experiment = mspp::ExperimentKind::lasso;
      write_rows(cfg, mspp::run_lasso_experiment(cfg));
    } else if (logistic->parsed()) {
      cfg.experiment = mspp::ExperimentKind::logistic;
      write_rows(cfg, mspp::run_logistic_experiment(cfg));
    } else {
      cfg.experiment = mspp::ExperimentKind::stability;
      const mspp::StabilityOutput result = mspp::run_stability_experiment(cfg);
      write_rows(cfg, result.rows);
      const std::string json = mspp::stability_report_json(result.report);
      if (cfg.report_path.empty()) {
        std::cout << json << '\n';
      } else {
        std::ofstream report(cfg.report_path, std::ios::binary);
        if (!report) throw mspp::parse_error("cannot open report path", 0);
        report << json << '\n';
      }
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const mspp::parse_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const mspp::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const mspp::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
