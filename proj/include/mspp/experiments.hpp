#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mspp/csv.hpp"
#include "mspp/stability.hpp"
#include "mspp/types.hpp"

namespace mspp {

enum class ExperimentKind { lasso, logistic, stability };
enum class AlgorithmKind { mspp, mspp_tp, mspp_swor, msgd };

std::string to_string(AlgorithmKind algo);

// One experiment invocation; flags and JSON config both land here. Zero or
// empty means "derive the documented default".
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::lasso;
  AlgorithmKind algorithm = AlgorithmKind::mspp;

  int p = 0;
  int n = 0;
  int T = 0;
  long N = 0;
  int epochs = 10;
  int k_bar = 0;
  double sigma = 0.1;
  double mu = -1.0;  // negative -> per-experiment default
  double rho = 0.5;
  bool rho_case2 = false;  // rho = sqrt(T/(n*lambda)), the small-T-large-n choice
  double truth_scale = 1.0;
  double step_c = 1.0;
  std::string step_rule;  // constant | inv-sqrt | inv-t; empty -> per-experiment default
  std::string gamma_schedule;  // linear-qg | linear-qg-offset | constant
  double gamma_value = 0.0;
  std::string tol_schedule = "poly-qg";  // exact | poly-qg | poly-convex | fixed
  double tol_eps = 1.0;
  std::string averaging;  // t-weighted | uniform | gamma-weighted
  std::string inner = "certified";  // certified | heuristic | sgd
  std::uint64_t seed = 0;
  int replications = 1;
  int jobs = 1;
  int tp_m = 0;
  double l_override = 0.0;
  double radius = 0.0;
  int n_perturbations = 20;
  int sampling_reps = 200;
  int eval_every = 0;
  double margin = 0.5;
  std::string data_path;
  std::string out_path;
  std::string report_path;
};

// Fraction of samples with sign(w'x) != y; sign(0) counts as +1.
double test_error(const Vector& w, std::span<const Sample> samples);

// Unit-margin separable binary data: y = sign(u'x) with |u'x| >= margin.
std::vector<Sample> make_separable_logistic(int p, int count, std::uint64_t seed, double margin);

std::vector<TraceRow> run_lasso_experiment(const ExperimentConfig& cfg);

std::vector<TraceRow> run_logistic_experiment(const ExperimentConfig& cfg);

struct StabilityOutput {
  std::vector<TraceRow> rows;
  StabilityReport report;
};

StabilityOutput run_stability_experiment(const ExperimentConfig& cfg);

std::string stability_report_json(const StabilityReport& report);

}  // namespace mspp
