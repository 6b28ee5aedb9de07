#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mspp/averaging.hpp"
#include "mspp/inner_solver.hpp"
#include "mspp/rng.hpp"
#include "mspp/schedules.hpp"
#include "mspp/types.hpp"

namespace mspp {

using SampleGenerator = std::function<Sample(Rng&)>;

// Where rounds get their data: a seeded stream of fresh i.i.d. minibatches,
// or a fixed list of minibatches (sampling without replacement, stability).
class MinibatchSource {
 public:
  static MinibatchSource stream(SampleGenerator generator, int n);
  static MinibatchSource fixed(std::vector<Minibatch> batches);

  bool is_stream() const { return stream_; }
  int fixed_rounds() const { return static_cast<int>(batches_.size()); }
  const std::vector<Minibatch>& fixed_batches() const { return batches_; }

  // Deterministic given (run_seed, t); stream batches are drawn from an
  // independent per-round substream.
  Minibatch batch(std::uint64_t run_seed, int t) const;

 private:
  MinibatchSource() = default;

  bool stream_ = false;
  SampleGenerator generator_;
  int n_ = 0;
  std::vector<Minibatch> batches_;
};

struct StepRule {
  enum class Kind { constant, inv_sqrt, inv_t };

  Kind kind = Kind::inv_sqrt;
  double c = 1.0;
  double lambda = 1.0;

  static StepRule constant(double c) { return {Kind::constant, c, 1.0}; }
  static StepRule inv_sqrt(double c) { return {Kind::inv_sqrt, c, 1.0}; }
  static StepRule inv_t(double c, double lambda) { return {Kind::inv_t, c, lambda}; }
};

double step_at(const StepRule& rule, int t);

// How each round's subproblem is solved. certified drives the tolerance
// schedule; objective_diff reproduces the objective-difference stop; custom
// lets the harness plug in an uncertified solver.
struct InnerSolve {
  enum class Kind { certified, objective_diff, custom };

  Kind kind = Kind::certified;
  double obj_diff_tol = 1e-3;
  int max_iters = 1000;
  long max_iters_hard = 100000;
  std::function<SolveResult(const ProxSubproblem&, int t)> custom;
};

// Optional per-round evaluation of the running average, e.g. excess risk.
using MetricFn = std::function<double(int t, long samples_seen, const Vector& running_average)>;

struct MsppConfig {
  int n = 1;
  int T = 1;
  GammaSchedule gamma = GammaSchedule::constant(1.0);
  ToleranceSchedule tol = ToleranceSchedule::exact();
  Vector w0;  // empty means zero vector
  std::uint64_t seed = 0;
  Averaging averaging = Averaging::t_weighted;
  InnerSolve inner;
  MetricFn metric;
  int metric_every = 1;
  bool warn_preconditions = true;
};

struct TraceEntry {
  int t = 0;
  long samples_seen = 0;
  bool has_metric = false;
  double metric = 0.0;
};

struct RunResult {
  Vector w_bar;
  std::vector<TraceEntry> trace;
  std::vector<SolveCertificate> per_round_certs;
  std::vector<SolveCertificate> phase1_certs;  // two-phase only
  std::vector<int> visit_order;                // swor only, 0-based batch indices
  long samples_consumed = 0;
};

// Minibatch stochastic proximal point: round t solves the minibatch ERM
// anchored at w_{t-1} to the scheduled certified tolerance, and the output is
// the configured weighted average of the iterates.
RunResult mspp(const MinibatchSource& source, const MsppConfig& cfg, const CompositeObjective& obj);

// Two-phase variant: phase I runs over ceil(n/m) sub-minibatches of the first
// round's data (gamma schedule restarted at t = 1) to warm-start phase II over
// rounds 2..T; output is the t-weighted average of the phase-II iterates.
RunResult mspp_two_phase(const MinibatchSource& source, const MsppConfig& cfg,
                         const CompositeObjective& obj, int m);

// Sampling-without-replacement variant over cfg.T fixed minibatches, visited
// in a seeded uniformly random order.
RunResult mspp_swor(const MinibatchSource& source, const MsppConfig& cfg,
                    const CompositeObjective& obj, bool force_identity_permutation = false);

// Proximal minibatch SGD baseline: w_t = prox_{eta_t r}(w_{t-1} - eta_t g_t).
RunResult msgd(const MinibatchSource& source, const MsppConfig& cfg, const CompositeObjective& obj,
               const StepRule& step);

}  // namespace mspp
