#include "mspp/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <mutex>
#include <sstream>

#include "json.hpp"
#include "mspp/algorithms.hpp"
#include "mspp/libsvm.hpp"
#include "mspp/oracle.hpp"

namespace mspp {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

AlgorithmKind parse_algo_or_throw(AlgorithmKind algo, ExperimentKind kind) {
  if (kind == ExperimentKind::stability && algo != AlgorithmKind::mspp &&
      algo != AlgorithmKind::mspp_swor)
    throw config_error("stability experiment supports only mspp and mspp-swor");
  return algo;
}

Averaging parse_averaging(const std::string& name, Averaging fallback) {
  if (name.empty()) return fallback;
  if (name == "t-weighted") return Averaging::t_weighted;
  if (name == "uniform") return Averaging::uniform;
  if (name == "gamma-weighted") return Averaging::gamma_weighted;
  throw config_error("unknown averaging '" + name + "'");
}

StepRule parse_step_rule(const ExperimentConfig& cfg, const std::string& fallback,
                         double lambda) {
  const std::string& name = cfg.step_rule.empty() ? fallback : cfg.step_rule;
  if (name == "constant") return StepRule::constant(cfg.step_c);
  if (name == "inv-sqrt") return StepRule::inv_sqrt(cfg.step_c);
  if (name == "inv-t") return StepRule::inv_t(cfg.step_c, lambda);
  throw config_error("unknown step rule '" + name + "'");
}

double effective_rho(const ExperimentConfig& cfg, double lambda, int n, int T) {
  if (!cfg.rho_case2) return cfg.rho;
  return std::clamp(std::sqrt(static_cast<double>(T) / (n * lambda)), 1e-12, 0.5);
}

GammaSchedule make_gamma_schedule(const ExperimentConfig& cfg, const std::string& fallback,
                                  double lambda, double smoothness, int n, int T) {
  const std::string& name = cfg.gamma_schedule.empty() ? fallback : cfg.gamma_schedule;
  const double rho = effective_rho(cfg, lambda, n, T);
  if (name == "linear-qg") return GammaSchedule::linear_qg(lambda, rho);
  if (name == "linear-qg-offset")
    return GammaSchedule::linear_qg_offset(lambda, rho, smoothness, n);
  if (name == "constant") {
    const double gamma = cfg.gamma_value > 0
                             ? cfg.gamma_value
                             : std::sqrt(static_cast<double>(T) / n) + 16.0 * smoothness / n;
    return GammaSchedule::constant(gamma);
  }
  throw config_error("unknown gamma schedule '" + name + "'");
}

ToleranceSchedule make_tol_schedule(const ExperimentConfig& cfg, const std::string& fallback,
                                    double fallback_eps, double reg_lipschitz,
                                    const GammaSchedule& gamma) {
  const std::string& name = cfg.tol_schedule.empty() ? fallback : cfg.tol_schedule;
  const double eps = cfg.tol_schedule.empty() ? fallback_eps : cfg.tol_eps;
  if (name == "exact") return ToleranceSchedule::exact();
  if (name == "poly-qg") return ToleranceSchedule::poly_qg(eps);
  if (name == "poly-convex")
    return ToleranceSchedule::poly_convex(eps, reg_lipschitz, gamma_at(gamma, 1));
  if (name == "fixed") return ToleranceSchedule::fixed(eps);
  throw config_error("unknown tolerance schedule '" + name + "'");
}

InnerSolve make_inner(const ExperimentConfig& cfg, std::uint64_t world) {
  InnerSolve inner;
  if (cfg.inner == "certified") {
    inner.kind = InnerSolve::Kind::certified;
  } else if (cfg.inner == "heuristic") {
    inner.kind = InnerSolve::Kind::objective_diff;
  } else if (cfg.inner == "sgd") {
    // Reproduction-style inner solver: a single epoch of SGD with batch size
    // 10 over the round's minibatch. Uncertified; the certificate reports the
    // achieved bound.
    inner.kind = InnerSolve::Kind::custom;
    inner.custom = [world](const ProxSubproblem& prob, int t) -> SolveResult {
      Rng rng(derive_seed(world, 7000 + static_cast<std::uint64_t>(t)));
      const std::vector<int> order = random_permutation(prob.batch.size(), rng);
      const double step = 1.0 / (batch_curvature(prob.obj.loss, prob.batch) + prob.gamma);
      Vector w = project_to_ball(prob.center, prob.obj.domain_radius);
      long chunks = 0;
      for (std::size_t start = 0; start < order.size(); start += 10) {
        const std::size_t stop = std::min(start + 10, order.size());
        Vector grad = Vector::Zero(w.size());
        for (std::size_t i = start; i < stop; ++i)
          grad += loss_gradient(prob.obj.loss, w, prob.batch.samples[order[i]]);
        grad /= static_cast<double>(stop - start);
        grad += prob.gamma * (w - prob.center);
        w = reg_prox_in_ball(prob.obj.reg, w - step * grad, step, prob.obj.domain_radius);
        ++chunks;
      }
      return {w, {certify(prob, w), chunks, subproblem_value(prob, w), true}};
    };
  } else {
    throw config_error("unknown inner solver '" + cfg.inner + "'");
  }
  return inner;
}

// Fans the replications over a small worker pool and merges deterministically.
template <typename Fn>
std::vector<TraceRow> run_replicated(const ExperimentConfig& cfg, Fn per_replication) {
  if (cfg.replications < 1) throw config_error("replications must be >= 1");
  const int jobs = std::max(1, cfg.jobs);
  std::vector<std::vector<TraceRow>> results(cfg.replications);
  if (jobs == 1) {
    for (int r = 0; r < cfg.replications; ++r) results[r] = per_replication(r);
  } else {
    for (int base = 0; base < cfg.replications; base += jobs) {
      const int stop = std::min(base + jobs, cfg.replications);
      std::vector<std::future<std::vector<TraceRow>>> wave;
      for (int r = base; r < stop; ++r)
        wave.push_back(std::async(std::launch::async, per_replication, r));
      for (int r = base; r < stop; ++r) results[r] = wave[r - base].get();
    }
  }
  std::vector<TraceRow> rows;
  for (auto& part : results) rows.insert(rows.end(), part.begin(), part.end());
  std::stable_sort(rows.begin(), rows.end(), [](const TraceRow& a, const TraceRow& b) {
    if (a.run_id != b.run_id) return a.run_id < b.run_id;
    return a.t < b.t;
  });
  return rows;
}

std::string run_id_for(const ExperimentConfig& cfg, int replication) {
  std::ostringstream id;
  id << to_string(cfg.algorithm) << "-s" << cfg.seed << "-r" << replication;
  return id.str();
}

}  // namespace

std::string to_string(AlgorithmKind algo) {
  switch (algo) {
    case AlgorithmKind::mspp:
      return "mspp";
    case AlgorithmKind::mspp_tp:
      return "mspp-tp";
    case AlgorithmKind::mspp_swor:
      return "mspp-swor";
    case AlgorithmKind::msgd:
      return "msgd";
  }
  throw config_error("unknown algorithm");
}

double test_error(const Vector& w, std::span<const Sample> samples) {
  if (samples.empty()) throw config_error("test_error: empty evaluation set");
  long wrong = 0;
  for (const Sample& z : samples) {
    const double prediction = w.dot(z.x) >= 0 ? 1.0 : -1.0;  // sign(0) counts as +1
    if (prediction != z.y) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(samples.size());
}

std::vector<Sample> make_separable_logistic(int p, int count, std::uint64_t seed, double margin) {
  if (p < 1 || count < 1) throw config_error("separable data: p and count must be >= 1");
  if (margin < 0) throw config_error("separable data: margin must be nonnegative");
  Rng rng(seed);
  Vector direction(p);
  for (int i = 0; i < p; ++i) direction[i] = rng.next_gaussian();
  direction.normalize();
  std::vector<Sample> samples;
  samples.reserve(count);
  while (static_cast<int>(samples.size()) < count) {
    Sample z;
    z.x = Vector(p);
    for (int i = 0; i < p; ++i) z.x[i] = rng.next_gaussian();
    const double activation = direction.dot(z.x);
    if (std::abs(activation) < margin) continue;
    z.y = activation >= 0 ? 1.0 : -1.0;
    samples.push_back(std::move(z));
  }
  return samples;
}

std::vector<TraceRow> run_lasso_experiment(const ExperimentConfig& cfg) {
  parse_algo_or_throw(cfg.algorithm, ExperimentKind::lasso);
  const int p = cfg.p > 0 ? cfg.p : 200;
  const long total = cfg.N > 0 ? cfg.N : 100L * p;
  const int T = cfg.T > 0 ? cfg.T : 50;
  int n = cfg.n;
  if (n > 0) {
    if (cfg.N > 0 && static_cast<long>(n) * T != total)
      throw config_error("inconsistent sizes: n*T must equal N (" + std::to_string(n) + "*" +
                         std::to_string(T) + " != " + std::to_string(total) + ")");
  } else {
    if (total % T != 0)
      throw config_error("inconsistent sizes: T must divide N when n is not given");
    n = static_cast<int>(total / T);
  }
  if (n < 1) throw config_error("derived minibatch size must be >= 1");
  const int k_bar = cfg.k_bar > 0 ? cfg.k_bar : std::max(1, static_cast<int>(std::lround(0.2 * p)));
  const double mu = cfg.mu >= 0 ? cfg.mu : 1e-3;

  const auto per_replication = [&, n](int r) {
    const std::uint64_t world = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
    const LassoGroundTruth truth =
        generate_truth(p, k_bar, derive_seed(world, 1), cfg.sigma, mu, cfg.truth_scale);
    const auto [lambda, l_pop] = qg_constants(truth);

    double smoothness = cfg.l_override;
    if (smoothness <= 0) {
      const auto probe = sample_lasso(truth, std::min(n, 256), derive_seed(world, 3));
      smoothness = smoothness_bound(LossKind::quadratic, probe);
    }

    CompositeObjective obj;
    obj.loss = LossKind::quadratic;
    obj.reg = mu > 0 ? Regularizer::l1(mu) : Regularizer::none();
    obj.smoothness = smoothness;
    obj.reg_lipschitz = mu * std::sqrt(static_cast<double>(p));
    obj.growth = lambda;
    if (cfg.radius > 0) obj.domain_radius = cfg.radius;

    MsppConfig mcfg;
    mcfg.n = n;
    mcfg.T = T;
    mcfg.gamma = make_gamma_schedule(cfg, "linear-qg", lambda, smoothness, n, T);
    mcfg.tol = make_tol_schedule(cfg, "poly-qg", cfg.tol_eps, obj.reg_lipschitz, mcfg.gamma);
    mcfg.w0 = Vector::Zero(p);
    mcfg.seed = derive_seed(world, 2);
    const Averaging default_avg = cfg.algorithm == AlgorithmKind::mspp_swor
                                      ? Averaging::gamma_weighted
                                      : (mcfg.gamma.kind == GammaSchedule::Kind::constant
                                             ? Averaging::uniform
                                             : Averaging::t_weighted);
    mcfg.averaging = parse_averaging(cfg.averaging, default_avg);
    mcfg.inner = make_inner(cfg, world);
    mcfg.metric_every = cfg.eval_every > 0 ? cfg.eval_every : 1;

    const std::string run_id = run_id_for(cfg, r);
    const std::string algo_name = to_string(cfg.algorithm);
    const auto start = Clock::now();
    std::vector<TraceRow> rows;
    mcfg.metric = [&](int t, long samples_seen, const Vector& w_avg) {
      const double value = excess_risk(truth, w_avg);
      rows.push_back({run_id, algo_name, t, samples_seen, "excess_risk", value, ms_since(start)});
      return value;
    };

    const MinibatchSource source =
        MinibatchSource::stream([truth](Rng& g) { return sample_lasso_one(truth, g); }, n);

    switch (cfg.algorithm) {
      case AlgorithmKind::mspp:
        mspp(source, mcfg, obj);
        break;
      case AlgorithmKind::mspp_tp: {
        int m = cfg.tp_m > 0 ? cfg.tp_m : static_cast<int>(std::lround(128.0 * smoothness / lambda));
        m = std::clamp(m, 1, n);
        mspp_two_phase(source, mcfg, obj, m);
        break;
      }
      case AlgorithmKind::mspp_swor: {
        std::vector<Minibatch> batches;
        batches.reserve(T);
        for (int t = 1; t <= T; ++t) batches.push_back(source.batch(mcfg.seed, t));
        mspp_swor(MinibatchSource::fixed(std::move(batches)), mcfg, obj);
        break;
      }
      case AlgorithmKind::msgd:
        msgd(source, mcfg, obj, parse_step_rule(cfg, "inv-t", lambda));
        break;
    }
    return rows;
  };

  return run_replicated(cfg, per_replication);
}

std::vector<TraceRow> run_logistic_experiment(const ExperimentConfig& cfg) {
  parse_algo_or_throw(cfg.algorithm, ExperimentKind::logistic);
  const int p_default = 50;
  const long total_default = 20000;
  const double mu = cfg.mu >= 0 ? cfg.mu : 0.0;

  Dataset loaded;
  if (!cfg.data_path.empty()) loaded = parse_libsvm(cfg.data_path);

  const auto per_replication = [&](int r) {
    const std::uint64_t world = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));

    std::vector<Sample> data;
    int p = 0;
    if (!cfg.data_path.empty()) {
      data = loaded.samples;
      p = loaded.dim;
    } else {
      p = cfg.p > 0 ? cfg.p : p_default;
      const long total = cfg.N > 0 ? cfg.N : total_default;
      data = make_separable_logistic(p, static_cast<int>(total), derive_seed(world, 1),
                                     cfg.margin);
    }

    // 50/50 train/test split by seeded shuffle.
    Rng split_rng(derive_seed(world, 2));
    std::vector<int> order = random_permutation(static_cast<int>(data.size()), split_rng);
    const int train_size = static_cast<int>(data.size()) / 2;
    if (train_size < 1 || static_cast<int>(data.size()) - train_size < 1)
      throw config_error("logistic: dataset too small to split");
    std::vector<Sample> train, test;
    train.reserve(train_size);
    test.reserve(data.size() - train_size);
    for (int i = 0; i < static_cast<int>(data.size()); ++i)
      (i < train_size ? train : test).push_back(data[order[i]]);

    const int n = cfg.n > 0 ? cfg.n : std::max(1, train_size / 5);
    if (n > train_size) throw config_error("logistic: n exceeds the training set size");
    const int batches_per_epoch = train_size / n;
    if (batches_per_epoch < 1) throw config_error("logistic: no full minibatch per epoch");
    const int epochs = std::max(1, cfg.epochs);
    const int T = cfg.T > 0 ? cfg.T : batches_per_epoch * epochs;

    // Epoch-wise reshuffled partition; the tail that does not fill a
    // minibatch is skipped within each epoch.
    std::vector<Minibatch> batches;
    batches.reserve(T);
    for (int e = 0; static_cast<int>(batches.size()) < T; ++e) {
      Rng epoch_rng(derive_seed(world, 100 + static_cast<std::uint64_t>(e)));
      const std::vector<int> perm = random_permutation(train_size, epoch_rng);
      for (int b = 0; b < batches_per_epoch && static_cast<int>(batches.size()) < T; ++b) {
        Minibatch batch;
        batch.samples.reserve(n);
        for (int i = 0; i < n; ++i) batch.samples.push_back(train[perm[b * n + i]]);
        batches.push_back(std::move(batch));
      }
    }

    const double smoothness =
        cfg.l_override > 0 ? cfg.l_override : smoothness_bound(LossKind::logistic, train);

    CompositeObjective obj;
    obj.loss = LossKind::logistic;
    obj.reg = mu > 0 ? Regularizer::l1(mu) : Regularizer::none();
    obj.smoothness = smoothness;
    obj.reg_lipschitz = mu * std::sqrt(static_cast<double>(p));
    if (cfg.radius > 0) obj.domain_radius = cfg.radius;

    MsppConfig mcfg;
    mcfg.n = n;
    mcfg.T = T;
    mcfg.gamma = make_gamma_schedule(cfg, "constant", 1.0, smoothness, n, T);
    mcfg.tol = make_tol_schedule(cfg, "poly-qg", cfg.tol_eps, obj.reg_lipschitz, mcfg.gamma);
    mcfg.w0 = Vector::Zero(p);
    mcfg.seed = derive_seed(world, 4);
    const Averaging default_avg = cfg.algorithm == AlgorithmKind::mspp_swor
                                      ? Averaging::gamma_weighted
                                      : Averaging::uniform;
    mcfg.averaging = parse_averaging(cfg.averaging, default_avg);
    mcfg.inner = make_inner(cfg, world);
    mcfg.metric_every =
        cfg.eval_every > 0 ? cfg.eval_every : std::max(1, (T + 49) / 50);

    const std::string run_id = run_id_for(cfg, r);
    const std::string algo_name = to_string(cfg.algorithm);
    const auto start = Clock::now();
    std::vector<TraceRow> rows;
    mcfg.metric = [&](int t, long samples_seen, const Vector& w_avg) {
      const double value = test_error(w_avg, test);
      rows.push_back({run_id, algo_name, t, samples_seen, "test_error", value, ms_since(start)});
      return value;
    };

    const MinibatchSource source = MinibatchSource::fixed(std::move(batches));
    switch (cfg.algorithm) {
      case AlgorithmKind::mspp:
        mspp(source, mcfg, obj);
        break;
      case AlgorithmKind::mspp_tp: {
        int m = cfg.tp_m > 0 ? cfg.tp_m : static_cast<int>(std::lround(128.0 * smoothness));
        m = std::clamp(m, 1, n);
        mspp_two_phase(source, mcfg, obj, m);
        break;
      }
      case AlgorithmKind::mspp_swor:
        mspp_swor(source, mcfg, obj);
        break;
      case AlgorithmKind::msgd:
        msgd(source, mcfg, obj, parse_step_rule(cfg, "inv-sqrt", 1.0));
        break;
    }
    return rows;
  };

  return run_replicated(cfg, per_replication);
}

StabilityOutput run_stability_experiment(const ExperimentConfig& cfg) {
  const AlgorithmKind algo = parse_algo_or_throw(cfg.algorithm, ExperimentKind::stability);
  const int p = cfg.p > 0 ? cfg.p : 5;
  const int n = cfg.n > 0 ? cfg.n : 8;
  const int T = cfg.T > 0 ? cfg.T : 6;
  const double radius = cfg.radius > 0 ? cfg.radius : 1.0;
  const double mu = cfg.mu >= 0 ? cfg.mu : 0.0;
  const int k_bar = cfg.k_bar > 0 ? cfg.k_bar : std::max(1, static_cast<int>(std::lround(0.2 * p)));

  StabilityOutput out;
  const auto per_replication = [&](int r) {
    const std::uint64_t world = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
    const LassoGroundTruth truth = generate_truth(p, k_bar, derive_seed(world, 1), cfg.sigma, mu, cfg.truth_scale);

    const std::vector<Sample> samples = sample_lasso(truth, n * T, derive_seed(world, 2));
    std::vector<Minibatch> batches(T);
    for (int t = 0; t < T; ++t)
      batches[t].samples.assign(samples.begin() + static_cast<long>(t) * n,
                                samples.begin() + static_cast<long>(t + 1) * n);

    Rng spec_rng(derive_seed(world, 3));
    std::vector<PerturbationSpec> specs;
    specs.reserve(cfg.n_perturbations);
    for (int i = 0; i < cfg.n_perturbations; ++i) {
      PerturbationSpec spec;
      spec.batch_index = 1 + spec_rng.next_index(T);
      spec.sample_index = 1 + spec_rng.next_index(n);
      spec.replacement = sample_lasso_one(truth, spec_rng);
      specs.push_back(std::move(spec));
    }

    CompositeObjective obj;
    obj.loss = LossKind::quadratic;
    obj.reg = mu > 0 ? Regularizer::l1(mu) : Regularizer::none();
    obj.smoothness = smoothness_bound(LossKind::quadratic, samples);
    obj.reg_lipschitz = mu * std::sqrt(static_cast<double>(p));
    obj.domain_radius = radius;

    MsppConfig mcfg;
    mcfg.n = n;
    mcfg.T = T;
    mcfg.gamma = make_gamma_schedule(cfg, "linear-qg", 2.0, obj.smoothness, n, T);  // t/4 default
    mcfg.tol = make_tol_schedule(cfg, "fixed", 1e-10, obj.reg_lipschitz, mcfg.gamma);
    mcfg.w0 = Vector::Zero(p);
    mcfg.seed = derive_seed(world, 4);
    mcfg.averaging = parse_averaging(
        cfg.averaging, algo == AlgorithmKind::mspp_swor ? Averaging::gamma_weighted
                                                        : Averaging::t_weighted);
    mcfg.inner = make_inner(cfg, world);
    mcfg.warn_preconditions = false;

    const StabilityAlgo variant =
        algo == AlgorithmKind::mspp_swor ? StabilityAlgo::mspp_swor : StabilityAlgo::mspp;
    const auto start = Clock::now();
    const StabilityReport report =
        measure_stability(variant, batches, mcfg, obj, specs, cfg.sampling_reps);

    std::vector<Sample> pool = samples;
    for (const auto& spec : specs) pool.push_back(spec.replacement);
    const double big_l = smoothness_bound(obj.loss, pool);
    const double big_m = loss_bound_M(obj, radius, pool);

    const std::string run_id = run_id_for(cfg, r);
    const std::string algo_name = to_string(cfg.algorithm);
    std::vector<TraceRow> rows;
    rows.push_back({run_id, algo_name, 0, static_cast<long>(n) * T, "stability_bound_a",
                    stability_bound(StabilityAlgo::mspp, mcfg, big_l, big_m), ms_since(start)});
    rows.push_back({run_id, algo_name, 0, static_cast<long>(n) * T, "stability_bound_b",
                    stability_bound(StabilityAlgo::mspp_swor, mcfg, big_l, big_m),
                    ms_since(start)});
    rows.push_back({run_id, algo_name, 0, static_cast<long>(n) * T, "stability_empirical_sup",
                    report.empirical_sup, ms_since(start)});
    for (std::size_t i = 0; i < report.per_perturbation.size(); ++i) {
      rows.push_back({run_id, algo_name, static_cast<int>(i + 1), static_cast<long>(n) * T,
                      "stability_distance", report.per_perturbation[i].distance,
                      ms_since(start)});
    }

    {
      static std::mutex report_mutex;
      std::lock_guard<std::mutex> lock(report_mutex);
      out.report.theory_bound = std::max(out.report.theory_bound, report.theory_bound);
      out.report.empirical_sup = std::max(out.report.empirical_sup, report.empirical_sup);
      out.report.per_perturbation.insert(out.report.per_perturbation.end(),
                                         report.per_perturbation.begin(),
                                         report.per_perturbation.end());
    }
    return rows;
  };

  out.rows = run_replicated(cfg, per_replication);
  return out;
}

std::string stability_report_json(const StabilityReport& report) {
  nlohmann::json j;
  j["empirical_sup"] = report.empirical_sup;
  j["theory_bound"] = report.theory_bound;
  j["per_perturbation"] = nlohmann::json::array();
  for (const auto& d : report.per_perturbation) {
    j["per_perturbation"].push_back({{"batch_index", d.batch_index},
                                     {"sample_index", d.sample_index},
                                     {"distance", d.distance}});
  }
  return j.dump(2);
}

}  // namespace mspp
