#include "mspp/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <utility>

namespace mspp {

MinibatchSource MinibatchSource::stream(SampleGenerator generator, int n) {
  if (!generator) throw config_error("stream source: missing generator");
  if (n < 1) throw config_error("stream source: n must be >= 1");
  MinibatchSource s;
  s.stream_ = true;
  s.generator_ = std::move(generator);
  s.n_ = n;
  return s;
}

MinibatchSource MinibatchSource::fixed(std::vector<Minibatch> batches) {
  if (batches.empty()) throw config_error("fixed source: no batches");
  const int n = batches.front().size();
  const int p = batches.front().dim();
  for (const Minibatch& b : batches) {
    if (b.size() != n || b.dim() != p)
      throw config_error("fixed source: batches must share n and p");
  }
  MinibatchSource s;
  s.batches_ = std::move(batches);
  return s;
}

Minibatch MinibatchSource::batch(std::uint64_t run_seed, int t) const {
  if (t < 1) throw config_error("batch: t must be >= 1");
  if (!stream_) {
    if (t > fixed_rounds()) throw config_error("batch: round past fixed batch count");
    return batches_[t - 1];
  }
  Rng rng(derive_seed(run_seed, static_cast<std::uint64_t>(t)));
  Minibatch b;
  b.samples.reserve(n_);
  for (int i = 0; i < n_; ++i) b.samples.push_back(generator_(rng));
  return b;
}

double step_at(const StepRule& rule, int t) {
  if (t < 1) throw config_error("step_at: t must be >= 1");
  switch (rule.kind) {
    case StepRule::Kind::constant:
      return rule.c;
    case StepRule::Kind::inv_sqrt:
      return rule.c / std::sqrt(static_cast<double>(t));
    case StepRule::Kind::inv_t:
      return rule.c / (rule.lambda * t);
  }
  throw config_error("unknown step rule");
}

namespace {

void validate_config(const MsppConfig& cfg) {
  if (cfg.n < 1 || cfg.T < 1) throw config_error("config: n and T must be >= 1");
  if (cfg.metric_every < 1) throw config_error("config: metric_every must be >= 1");
}

void warn_schedule_precondition(const MsppConfig& cfg, const CompositeObjective& obj) {
  if (!cfg.warn_preconditions) return;
  if (cfg.gamma.kind == GammaSchedule::Kind::linear_qg) {
    const double required = 64.0 * obj.smoothness / (cfg.gamma.lambda * cfg.gamma.rho);
    if (cfg.n < required) {
      std::cerr << "mspp: n = " << cfg.n << " below the linear-schedule requirement n >= "
                << required << "; rate guarantees may not apply\n";
    }
  } else if (cfg.gamma.kind == GammaSchedule::Kind::constant) {
    const double floor = 16.0 * obj.smoothness / cfg.n;
    if (cfg.gamma.gamma < floor) {
      std::cerr << "mspp: constant gamma = " << cfg.gamma.gamma
                << " below the 16L/n floor " << floor << "; rate guarantees may not apply\n";
    }
  }
}

Vector initial_point(const MsppConfig& cfg, int dim, const CompositeObjective& obj) {
  Vector w0 = cfg.w0.size() > 0 ? cfg.w0 : Vector::Zero(dim);
  if (w0.size() != dim) throw config_error("config: w0 dimension mismatch");
  return project_to_ball(w0, obj.domain_radius);
}

SolveResult solve_round(const CompositeObjective& obj, Minibatch batch, const Vector& center,
                        double gamma_t, double eps_t, const InnerSolve& inner, int t) {
  ProxSubproblem prob{obj, std::move(batch), center, gamma_t};
  switch (inner.kind) {
    case InnerSolve::Kind::certified: {
      SolveOptions opts = SolveOptions::certified(eps_t);
      opts.max_iters_hard = inner.max_iters_hard;
      SolveResult res = solve(prob, opts);
      if (!res.cert.reached_target)
        throw numerical_error("inner solve missed certified tolerance", t);
      return res;
    }
    case InnerSolve::Kind::objective_diff: {
      SolveOptions opts = SolveOptions::objective_diff(inner.obj_diff_tol, inner.max_iters);
      opts.max_iters_hard = inner.max_iters_hard;
      return solve(prob, opts);
    }
    case InnerSolve::Kind::custom:
      if (!inner.custom) throw config_error("config: custom inner solver not set");
      return inner.custom(prob, t);
  }
  throw config_error("unknown inner solve kind");
}

// Shared proximal-point recursion over rounds t_begin..t_end. The schedule
// index and the averaging weight both use the global round index t.
template <typename BatchProvider>
void run_rounds(const BatchProvider& provider, int t_begin, int t_end, const MsppConfig& cfg,
                const CompositeObjective& obj, Vector& w, Averager& avg, long& samples_seen,
                std::vector<SolveCertificate>& certs, std::vector<TraceEntry>* trace) {
  for (int t = t_begin; t <= t_end; ++t) {
    Minibatch batch = provider(t);
    const int batch_size = batch.size();
    const double gamma_t = gamma_at(cfg.gamma, t);
    const double eps_t = effective_tolerance(cfg.tol, t, batch_size);
    SolveResult res = solve_round(obj, std::move(batch), w, gamma_t, eps_t, cfg.inner, t);
    w = std::move(res.w);
    avg.add(t, gamma_t, w);
    samples_seen += batch_size;
    certs.push_back(res.cert);
    if (trace) {
      TraceEntry entry;
      entry.t = t;
      entry.samples_seen = samples_seen;
      if (cfg.metric && (t % cfg.metric_every == 0 || t == t_end)) {
        entry.metric = cfg.metric(t, samples_seen, avg.average());
        entry.has_metric = true;
      }
      trace->push_back(entry);
    }
  }
}

int source_dim(const MinibatchSource& source, const MsppConfig& cfg) {
  if (cfg.w0.size() > 0) return static_cast<int>(cfg.w0.size());
  if (!source.is_stream()) return source.fixed_batches().front().dim();
  return source.batch(cfg.seed, 1).dim();  // deterministic, so the peek is free
}

}  // namespace

RunResult mspp(const MinibatchSource& source, const MsppConfig& cfg,
               const CompositeObjective& obj) {
  validate_config(cfg);
  if (!source.is_stream() && source.fixed_rounds() < cfg.T)
    throw config_error("mspp: fewer fixed batches than rounds");
  warn_schedule_precondition(cfg, obj);

  RunResult out;
  Vector w = initial_point(cfg, source_dim(source, cfg), obj);
  Averager avg(cfg.averaging);
  long samples_seen = 0;
  const auto provider = [&](int t) { return source.batch(cfg.seed, t); };
  run_rounds(provider, 1, cfg.T, cfg, obj, w, avg, samples_seen, out.per_round_certs, &out.trace);
  out.w_bar = avg.average();
  out.samples_consumed = samples_seen;
  return out;
}

RunResult mspp_two_phase(const MinibatchSource& source, const MsppConfig& cfg,
                         const CompositeObjective& obj, int m) {
  validate_config(cfg);
  if (cfg.T < 2) throw config_error("two-phase: T must be >= 2 (phase II would be empty)");
  warn_schedule_precondition(cfg, obj);

  Minibatch first = source.batch(cfg.seed, 1);
  const int n = first.size();
  if (m < 1 || m > n) throw config_error("two-phase: m must be in [1, n]");

  // Phase I: sub-minibatches of size m over the first round's data; the last
  // chunk takes the remainder when m does not divide n.
  std::vector<Minibatch> chunks;
  for (int start = 0; start < n; start += m) {
    Minibatch chunk;
    const int stop = std::min(start + m, n);
    chunk.samples.assign(first.samples.begin() + start, first.samples.begin() + stop);
    chunks.push_back(std::move(chunk));
  }

  RunResult out;
  Vector w = initial_point(cfg, first.dim(), obj);
  long samples_seen = 0;
  {
    Averager phase1_avg(cfg.averaging);
    const auto provider = [&](int t) { return chunks[t - 1]; };
    run_rounds(provider, 1, static_cast<int>(chunks.size()), cfg, obj, w, phase1_avg,
               samples_seen, out.phase1_certs, nullptr);
    w = phase1_avg.average();  // phase-II initialization w_1
  }

  // Phase II keeps the global schedule index; its output weighting is the
  // t-weighted average over t = 2..T.
  Averager avg(Averaging::t_weighted);
  const auto provider = [&](int t) { return source.batch(cfg.seed, t); };
  run_rounds(provider, 2, cfg.T, cfg, obj, w, avg, samples_seen, out.per_round_certs, &out.trace);
  out.w_bar = avg.average();
  out.samples_consumed = samples_seen;
  return out;
}

RunResult mspp_swor(const MinibatchSource& source, const MsppConfig& cfg,
                    const CompositeObjective& obj, bool force_identity_permutation) {
  validate_config(cfg);
  if (source.is_stream()) throw config_error("swor: requires fixed batches");
  if (source.fixed_rounds() != cfg.T) throw config_error("swor: batch count must equal T");
  warn_schedule_precondition(cfg, obj);

  std::vector<int> perm;
  if (force_identity_permutation) {
    perm.resize(cfg.T);
    for (int i = 0; i < cfg.T; ++i) perm[i] = i;
  } else {
    Rng rng(derive_seed(cfg.seed, 0x73776f72ULL));  // "swor" stream
    perm = random_permutation(cfg.T, rng);
  }

  RunResult out;
  out.visit_order = perm;
  Vector w = initial_point(cfg, source.fixed_batches().front().dim(), obj);
  Averager avg(cfg.averaging);
  long samples_seen = 0;
  const auto provider = [&](int t) { return source.fixed_batches()[perm[t - 1]]; };
  run_rounds(provider, 1, cfg.T, cfg, obj, w, avg, samples_seen, out.per_round_certs, &out.trace);
  out.w_bar = avg.average();
  out.samples_consumed = samples_seen;
  return out;
}

RunResult msgd(const MinibatchSource& source, const MsppConfig& cfg, const CompositeObjective& obj,
               const StepRule& step) {
  validate_config(cfg);
  if (!source.is_stream() && source.fixed_rounds() < cfg.T)
    throw config_error("msgd: fewer fixed batches than rounds");

  RunResult out;
  Vector w = initial_point(cfg, source_dim(source, cfg), obj);
  Averager avg(cfg.averaging);
  long samples_seen = 0;
  for (int t = 1; t <= cfg.T; ++t) {
    Minibatch batch = source.batch(cfg.seed, t);
    const double eta = step_at(step, t);
    Vector grad = mean_loss_gradient(obj, batch, w);
    w = reg_prox_in_ball(obj.reg, w - eta * grad, eta, obj.domain_radius);
    if (!w.allFinite()) throw numerical_error("msgd diverged: step too large", t);
    const double gamma_t = gamma_at(cfg.gamma, t);
    avg.add(t, gamma_t, w);
    samples_seen += batch.size();
    TraceEntry entry;
    entry.t = t;
    entry.samples_seen = samples_seen;
    if (cfg.metric && (t % cfg.metric_every == 0 || t == cfg.T)) {
      entry.metric = cfg.metric(t, samples_seen, avg.average());
      entry.has_metric = true;
    }
    out.trace.push_back(entry);
  }
  out.w_bar = avg.average();
  out.samples_consumed = samples_seen;
  return out;
}

}  // namespace mspp
