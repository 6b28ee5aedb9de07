#pragma once

#include <span>
#include <vector>

#include "mspp/algorithms.hpp"
#include "mspp/types.hpp"

namespace mspp {

// A neighboring-dataset edit: replace one sample of one minibatch. Indices
// are 1-based, batch_index in [1, T], sample_index in [1, n].
struct PerturbationSpec {
  int batch_index = 1;
  int sample_index = 1;
  Sample replacement;
};

enum class StabilityAlgo { mspp, mspp_swor };

struct PerturbationDistance {
  int batch_index = 0;
  int sample_index = 0;
  double distance = 0.0;
};

struct StabilityReport {
  double empirical_sup = 0.0;  // max over tried perturbations (a lower estimate of the sup)
  double theory_bound = 0.0;
  std::vector<PerturbationDistance> per_perturbation;
};

// Returns a copy with exactly the addressed sample replaced.
std::vector<Minibatch> perturb(const std::vector<Minibatch>& batches,
                               const PerturbationSpec& spec);

// Closed-form uniform-stability bounds, one per algorithm variant:
//   mspp       4*sqrt(2LM)/(n*min_t gamma_t) + sum_t 2*sqrt(2*eps_t/gamma_t)
//   mspp_swor  sum_t { 4*sqrt(2LM)/(n*T*gamma_t) + 2*sqrt(2*eps_t/gamma_t) }
// eps_t is the solver-facing (floored) tolerance actually enforced.
double stability_bound(StabilityAlgo algo, const MsppConfig& cfg, double smoothness,
                       double loss_bound);

// Loss range M over the ball of the given radius:
//   quadratic  max_i 0.5*(|y_i| + radius*||x_i||)^2
//   logistic   max_i log(1 + exp(radius*||x_i||))
double loss_bound_M(const CompositeObjective& obj, double radius, std::span<const Sample> data);

// Reruns the algorithm on the dataset and on each single-sample perturbation
// of it from identical (w0, seed) and records ||w_bar - w_bar'||. For swor the
// runs are coupled: per repetition, both datasets see the same permutation,
// and the reported distance is the mean over sampling_reps repetitions.
// Requires the ball domain so the loss range M is defined.
StabilityReport measure_stability(StabilityAlgo algo, const std::vector<Minibatch>& batches,
                                  const MsppConfig& cfg, const CompositeObjective& obj,
                                  const std::vector<PerturbationSpec>& specs, int sampling_reps);

}  // namespace mspp
