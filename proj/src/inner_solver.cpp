#include "mspp/inner_solver.hpp"

#include <algorithm>
#include <cmath>

#include "mspp/errors.hpp"

namespace mspp {

namespace {

void check_problem(const ProxSubproblem& prob, const Vector& w) {
  if (prob.gamma <= 0) throw config_error("subproblem: gamma must be positive");
  if (prob.batch.samples.empty()) throw config_error("subproblem: empty minibatch");
  if (w.size() != prob.center.size() || w.size() != prob.batch.dim())
    throw config_error("subproblem: dimension mismatch");
}

// Completes the smooth gradient to the minimal-norm subgradient of F.
Vector min_norm_from_smooth(const ProxSubproblem& prob, const Vector& w, Vector g) {
  const Regularizer& reg = prob.obj.reg;
  switch (reg.kind) {
    case RegKind::none:
      break;
    case RegKind::l2:
      g += reg.mu * w;
      break;
    case RegKind::l1:
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w[i] > 0) {
          g[i] += reg.mu;
        } else if (w[i] < 0) {
          g[i] -= reg.mu;
        } else {
          // At 0 the subgradient coordinate is free in [-mu, mu]; pick the
          // element that minimizes the total.
          g[i] += std::clamp(-g[i], -reg.mu, reg.mu);
        }
      }
      break;
  }
  if (prob.obj.domain_radius) {
    const double radius = *prob.obj.domain_radius;
    if (radius == 0.0) return Vector::Zero(w.size());  // normal cone of {0} is everything
    const double norm_sq = w.squaredNorm();
    if (norm_sq >= radius * radius * (1.0 - 1e-12)) {
      // Boundary: add the normal-cone ray theta*w with the norm-minimizing
      // theta. Coordinates with w_i = 0 are unaffected, so the l1 choice
      // above stays optimal.
      const double theta = std::max(0.0, -g.dot(w) / norm_sq);
      g += theta * w;
    }
  }
  return g;
}

}  // namespace

double subproblem_value(const ProxSubproblem& prob, const Vector& w) {
  check_problem(prob, w);
  return empirical_risk(prob.obj, prob.batch, w) +
         0.5 * prob.gamma * (w - prob.center).squaredNorm();
}

Vector smooth_gradient(const ProxSubproblem& prob, const Vector& w) {
  check_problem(prob, w);
  return mean_loss_gradient(prob.obj, prob.batch, w) + prob.gamma * (w - prob.center);
}

Vector min_norm_subgradient(const ProxSubproblem& prob, const Vector& w) {
  return min_norm_from_smooth(prob, w, smooth_gradient(prob, w));
}

double certify(const ProxSubproblem& prob, const Vector& w) {
  return min_norm_subgradient(prob, w).squaredNorm() / (2.0 * prob.gamma);
}

SolveResult solve(const ProxSubproblem& prob, const SolveOptions& opts, const Vector& w_init) {
  check_problem(prob, w_init);
  const double local_curvature = batch_curvature(prob.obj.loss, prob.batch);
  const double step = 1.0 / (local_curvature + prob.gamma);

  Vector w = project_to_ball(w_init, prob.obj.domain_radius);

  const auto prox_step = [&](const Vector& v) {
    Vector g = smooth_gradient(prob, v);
    return reg_prox_in_ball(prob.obj.reg, v - step * g, step, prob.obj.domain_radius);
  };

  if (opts.mode == SolveOptions::Mode::certified) {
    long iters = 0;
    while (true) {
      const double objective = subproblem_value(prob, w);
      if (!std::isfinite(objective))
        throw numerical_error("inner solve diverged: non-finite objective");
      Vector g = smooth_gradient(prob, w);
      const double bound = min_norm_from_smooth(prob, w, g).squaredNorm() / (2.0 * prob.gamma);
      if (bound <= opts.epsilon) return {w, {bound, iters, objective, true}};
      if (iters >= opts.max_iters_hard) return {w, {bound, iters, objective, false}};
      w = reg_prox_in_ball(prob.obj.reg, w - step * g, step, prob.obj.domain_radius);
      ++iters;
    }
  }

  // objective_diff: objective-difference stop or max_iters steps.
  double prev = subproblem_value(prob, w);
  if (!std::isfinite(prev)) throw numerical_error("inner solve diverged: non-finite objective");
  long iters = 0;
  double objective = prev;
  while (iters < opts.max_iters && iters < opts.max_iters_hard) {
    w = prox_step(w);
    ++iters;
    objective = subproblem_value(prob, w);
    if (!std::isfinite(objective))
      throw numerical_error("inner solve diverged: non-finite objective");
    if (std::abs(prev - objective) < opts.obj_diff_tol) break;
    prev = objective;
  }
  return {w, {certify(prob, w), iters, objective, true}};
}

SolveResult solve(const ProxSubproblem& prob, const SolveOptions& opts) {
  return solve(prob, opts, prob.center);
}

}  // namespace mspp
