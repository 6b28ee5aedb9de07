#pragma once

#include "mspp/composite.hpp"
#include "mspp/schedules.hpp"
#include "mspp/types.hpp"

namespace mspp {

// One round's regularized minibatch ERM
//   F(w) = R_S(w) + (gamma/2) * ||w - center||^2,
// gamma-strongly convex by construction.
struct ProxSubproblem {
  CompositeObjective obj;
  Minibatch batch;
  Vector center;
  double gamma = 1.0;
};

struct SolveOptions {
  enum class Mode { certified, objective_diff };

  Mode mode = Mode::certified;
  double epsilon = kExactToleranceFloor;  // certified: target on the certified bound
  double obj_diff_tol = 1e-3;             // heuristic: consecutive-objective stop
  int max_iters = 1000;                   // heuristic: iteration stop
  long max_iters_hard = 100000;           // safety cap in both modes

  static SolveOptions certified(double epsilon) {
    SolveOptions o;
    o.mode = Mode::certified;
    o.epsilon = epsilon;
    return o;
  }

  // Inner-loop termination used by the reproduction runs: stop when the
  // objective decrease falls below obj_diff_tol or after max_iters steps.
  static SolveOptions objective_diff(double obj_diff_tol = 1e-3, int max_iters = 1000) {
    SolveOptions o;
    o.mode = Mode::objective_diff;
    o.obj_diff_tol = obj_diff_tol;
    o.max_iters = max_iters;
    return o;
  }
};

struct SolveCertificate {
  double subopt_bound = 0.0;  // certified upper bound on F(w) - min F
  long iters_used = 0;
  double final_objective = 0.0;
  bool reached_target = true;  // certified mode: epsilon reached before the hard cap
};

struct SolveResult {
  Vector w;
  SolveCertificate cert;
};

double subproblem_value(const ProxSubproblem& prob, const Vector& w);

// Gradient of the smooth part f(w) = mean loss + (gamma/2)*||w - center||^2.
Vector smooth_gradient(const ProxSubproblem& prob, const Vector& w);

// Minimal-norm element of the full subdifferential of F at w, including the
// regularizer and, when a ball domain is set, the normal cone at the boundary.
Vector min_norm_subgradient(const ProxSubproblem& prob, const Vector& w);

// ||min_norm_subgradient||^2 / (2*gamma), an upper bound on F(w) - min F by
// gamma-strong convexity. Exact for pure quadratics.
double certify(const ProxSubproblem& prob, const Vector& w);

// Proximal gradient descent on the smooth part with fixed step
// 1/(batch curvature + gamma); composite step via the regularizer prox.
SolveResult solve(const ProxSubproblem& prob, const SolveOptions& opts, const Vector& w_init);

// Warm start at the anchor.
SolveResult solve(const ProxSubproblem& prob, const SolveOptions& opts);

}  // namespace mspp
