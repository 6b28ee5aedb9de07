#include "mspp/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mspp/losses.hpp"

namespace mspp {

namespace {

void check_spec(const std::vector<Minibatch>& batches, const PerturbationSpec& spec) {
  if (spec.batch_index < 1 || spec.batch_index > static_cast<int>(batches.size()))
    throw config_error("perturb: batch_index out of range");
  const Minibatch& target = batches[spec.batch_index - 1];
  if (spec.sample_index < 1 || spec.sample_index > target.size())
    throw config_error("perturb: sample_index out of range");
  if (spec.replacement.x.size() != target.dim())
    throw config_error("perturb: replacement dimension mismatch");
}

}  // namespace

std::vector<Minibatch> perturb(const std::vector<Minibatch>& batches,
                               const PerturbationSpec& spec) {
  check_spec(batches, spec);
  std::vector<Minibatch> edited = batches;
  edited[spec.batch_index - 1].samples[spec.sample_index - 1] = spec.replacement;
  return edited;
}

double stability_bound(StabilityAlgo algo, const MsppConfig& cfg, double smoothness,
                       double loss_bound) {
  if (smoothness <= 0 || loss_bound <= 0)
    throw config_error("stability_bound: L and M must be positive");
  const double lm = 4.0 * std::sqrt(2.0 * smoothness * loss_bound);
  double eps_sum = 0.0;
  double min_gamma = std::numeric_limits<double>::infinity();
  double swor_sum = 0.0;
  for (int t = 1; t <= cfg.T; ++t) {
    const double gamma_t = gamma_at(cfg.gamma, t);
    const double eps_t = effective_tolerance(cfg.tol, t, cfg.n);
    eps_sum += 2.0 * std::sqrt(2.0 * eps_t / gamma_t);
    min_gamma = std::min(min_gamma, gamma_t);
    swor_sum += lm / (cfg.n * static_cast<double>(cfg.T) * gamma_t);
  }
  switch (algo) {
    case StabilityAlgo::mspp:
      return lm / (cfg.n * min_gamma) + eps_sum;
    case StabilityAlgo::mspp_swor:
      return swor_sum + eps_sum;
  }
  throw config_error("unknown stability algorithm");
}

double loss_bound_M(const CompositeObjective& obj, double radius, std::span<const Sample> data) {
  if (radius < 0) throw config_error("loss_bound_M: radius must be nonnegative");
  if (data.empty()) throw config_error("loss_bound_M: empty data");
  double bound = 0.0;
  for (const Sample& z : data) {
    const double reach = radius * z.x.norm();
    double value = 0.0;
    switch (obj.loss) {
      case LossKind::quadratic:
        value = 0.5 * (std::abs(z.y) + reach) * (std::abs(z.y) + reach);
        break;
      case LossKind::logistic:
        value = std::log1p(std::exp(reach));
        break;
    }
    bound = std::max(bound, value);
  }
  return bound;
}

StabilityReport measure_stability(StabilityAlgo algo, const std::vector<Minibatch>& batches,
                                  const MsppConfig& cfg, const CompositeObjective& obj,
                                  const std::vector<PerturbationSpec>& specs, int sampling_reps) {
  if (static_cast<int>(batches.size()) != cfg.T)
    throw config_error("measure_stability: batch count must equal T");
  if (!obj.domain_radius)
    throw config_error("measure_stability: ball domain required for a bounded loss range");
  if (algo == StabilityAlgo::mspp_swor && sampling_reps < 1)
    throw config_error("measure_stability: sampling_reps must be >= 1");

  MsppConfig run_cfg = cfg;
  run_cfg.metric = nullptr;
  run_cfg.warn_preconditions = false;

  // L and M must cover the perturbed datasets too.
  std::vector<Sample> pool;
  for (const Minibatch& b : batches)
    pool.insert(pool.end(), b.samples.begin(), b.samples.end());
  for (const PerturbationSpec& spec : specs) {
    check_spec(batches, spec);
    pool.push_back(spec.replacement);
  }
  const double smoothness = smoothness_bound(obj.loss, pool);
  const double loss_bound = loss_bound_M(obj, *obj.domain_radius, pool);

  StabilityReport report;
  report.theory_bound = stability_bound(algo, run_cfg, smoothness, loss_bound);

  if (algo == StabilityAlgo::mspp) {
    const RunResult base = mspp(MinibatchSource::fixed(batches), run_cfg, obj);
    for (const PerturbationSpec& spec : specs) {
      const RunResult edited = mspp(MinibatchSource::fixed(perturb(batches, spec)), run_cfg, obj);
      report.per_perturbation.push_back(
          {spec.batch_index, spec.sample_index, (base.w_bar - edited.w_bar).norm()});
    }
  } else {
    // Coupled permutations: repetition r fixes one seed for both datasets, and
    // per-spec distances are averaged over repetitions.
    std::vector<double> sums(specs.size(), 0.0);
    for (int rep = 0; rep < sampling_reps; ++rep) {
      run_cfg.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(rep));
      const RunResult base = mspp_swor(MinibatchSource::fixed(batches), run_cfg, obj);
      for (std::size_t s = 0; s < specs.size(); ++s) {
        const RunResult edited =
            mspp_swor(MinibatchSource::fixed(perturb(batches, specs[s])), run_cfg, obj);
        sums[s] += (base.w_bar - edited.w_bar).norm();
      }
    }
    for (std::size_t s = 0; s < specs.size(); ++s)
      report.per_perturbation.push_back(
          {specs[s].batch_index, specs[s].sample_index, sums[s] / sampling_reps});
  }

  for (const PerturbationDistance& d : report.per_perturbation)
    report.empirical_sup = std::max(report.empirical_sup, d.distance);
  return report;
}

}  // namespace mspp
