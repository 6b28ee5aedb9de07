#include <cmath>

#include "doctest.h"
#include "mspp/inner_solver.hpp"
#include "oracles.hpp"

using mspp::ProxSubproblem;
using mspp::Regularizer;
using mspp::Sample;
using mspp::SolveOptions;
using mspp::Vector;

namespace {

Sample scalar_sample(double x, double y) {
  Sample z;
  z.x = Vector(1);
  z.x[0] = x;
  z.y = y;
  return z;
}

ProxSubproblem one_sample_problem(double x, double y, Regularizer reg, double center,
                                  double gamma) {
  ProxSubproblem prob;
  prob.obj.loss = mspp::LossKind::quadratic;
  prob.obj.reg = reg;
  prob.batch.samples.push_back(scalar_sample(x, y));
  prob.center = Vector(1);
  prob.center[0] = center;
  prob.gamma = gamma;
  return prob;
}

ProxSubproblem random_problem(mspp::Rng& rng, bool allow_ball = false) {
  ProxSubproblem prob;
  const int p = 1 + rng.next_index(10);
  const int n = 1 + rng.next_index(8);
  prob.obj.loss = rng.next_double() < 0.5 ? mspp::LossKind::quadratic : mspp::LossKind::logistic;
  const double pick = rng.next_double();
  if (pick < 0.4) {
    prob.obj.reg = Regularizer::l1(0.05 + 0.5 * rng.next_double());
  } else if (pick < 0.7) {
    prob.obj.reg = Regularizer::l2(0.05 + 0.5 * rng.next_double());
  } else {
    prob.obj.reg = Regularizer::none();
  }
  for (int i = 0; i < n; ++i) {
    Sample z;
    z.x = testio::gaussian_vector(p, rng);
    z.y = prob.obj.loss == mspp::LossKind::logistic ? (rng.next_double() < 0.5 ? -1.0 : 1.0)
                                                    : rng.next_gaussian();
    prob.batch.samples.push_back(std::move(z));
  }
  prob.center = testio::gaussian_vector(p, rng);
  prob.gamma = 0.5 + 3.5 * rng.next_double();
  if (allow_ball && rng.next_double() < 0.5) prob.obj.domain_radius = 0.5 + rng.next_double();
  return prob;
}

}  // namespace

TEST_CASE("solve: 1-D closed forms") {
  // No regularizer: stationarity (w - 1) + w = 0 gives w = 0.5.
  {
    const auto prob = one_sample_problem(1.0, 1.0, Regularizer::none(), 0.0, 1.0);
    const auto res = mspp::solve(prob, SolveOptions::certified(1e-16));
    CHECK(res.cert.reached_target);
    CHECK(res.w[0] == doctest::Approx(0.5).epsilon(1e-7));
    const double grid = testio::grid_min_1d(
        [&](double w) {
          Vector v(1);
          v[0] = w;
          return mspp::subproblem_value(prob, v);
        },
        -2.0, 2.0);
    CHECK(std::abs(grid - 0.5) <= 1e-4);
  }
  // l1(0.5): stationarity 2w - 1 + 0.5 = 0 on w > 0 gives w = 0.25.
  {
    const auto prob = one_sample_problem(1.0, 1.0, Regularizer::l1(0.5), 0.0, 1.0);
    const auto res = mspp::solve(prob, SolveOptions::certified(1e-16));
    CHECK(res.w[0] == doctest::Approx(0.25).epsilon(1e-7));
    const double grid = testio::grid_min_1d(
        [&](double w) {
          Vector v(1);
          v[0] = w;
          return mspp::subproblem_value(prob, v);
        },
        -2.0, 2.0);
    CHECK(std::abs(grid - 0.25) <= 1e-4);
  }
}

TEST_CASE("solve: optimal warm start returns immediately") {
  const auto prob = one_sample_problem(1.0, 1.0, Regularizer::l1(0.5), 0.0, 1.0);
  const auto first = mspp::solve(prob, SolveOptions::certified(1e-18));
  const auto again = mspp::solve(prob, SolveOptions::certified(1e-8), first.w);
  CHECK(again.cert.reached_target);
  CHECK(again.cert.subopt_bound <= 1e-8);
  CHECK(again.cert.iters_used <= 2);
}

TEST_CASE("min-norm subgradient") {
  // At the minimizer of an l1 subproblem the subgradient vanishes.
  {
    const auto prob = one_sample_problem(1.0, 1.0, Regularizer::l1(0.5), 0.0, 1.0);
    const auto res = mspp::solve(prob, SolveOptions::certified(1e-21));
    CHECK(mspp::min_norm_subgradient(prob, res.w).norm() <= 1e-10);
  }
  // Without a regularizer it is the plain gradient of F.
  {
    mspp::Rng rng(41);
    auto prob = random_problem(rng);
    prob.obj.reg = Regularizer::none();
    prob.obj.domain_radius.reset();
    const Vector w = testio::gaussian_vector(prob.batch.dim(), rng);
    CHECK((mspp::min_norm_subgradient(prob, w) - mspp::smooth_gradient(prob, w)).norm() == 0.0);
  }
  // 1-D l1 with smooth gradient 0.4 at w = 0: clamped to zero.
  {
    const auto prob = one_sample_problem(1.0, -0.4, Regularizer::l1(1.0), 0.0, 1.0);
    const Vector at_zero = Vector::Zero(1);
    CHECK(mspp::smooth_gradient(prob, at_zero)[0] == doctest::Approx(0.4));
    CHECK(mspp::min_norm_subgradient(prob, at_zero).norm() == 0.0);
  }
}

TEST_CASE("certify: exact values and soundness") {
  // F(w) = w^2 via a zero sample and gamma = 2; at w = 0.1 the bound equals
  // the true gap 0.01.
  {
    const auto prob = one_sample_problem(0.0, 0.0, Regularizer::none(), 0.0, 2.0);
    Vector w(1);
    w[0] = 0.1;
    CHECK(mspp::certify(prob, w) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(mspp::subproblem_value(prob, w) == doctest::Approx(0.01).epsilon(1e-12));
  }
  // At a high-accuracy minimizer the certificate is tiny.
  {
    const auto prob = one_sample_problem(1.0, 1.0, Regularizer::none(), 0.0, 1.0);
    const auto res = mspp::solve(prob, SolveOptions::certified(1e-18));
    CHECK(res.cert.reached_target);
    CHECK(mspp::certify(prob, res.w) <= 1e-18);
  }
  // Soundness on random subproblems against a long-run reference solve.
  mspp::Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const auto prob = random_problem(rng);
    const Vector reference = testio::reference_minimizer(prob);
    const double best = mspp::subproblem_value(prob, reference);
    Vector w = prob.center + 0.5 * testio::gaussian_vector(prob.batch.dim(), rng);
    CHECK(mspp::certify(prob, w) >= mspp::subproblem_value(prob, w) - best - 1e-9);
  }
}

TEST_CASE("subproblem inequality at near-exact solutions") {
  mspp::Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const auto prob = random_problem(rng);
    const auto res = mspp::solve(prob, SolveOptions::certified(1e-20));
    REQUIRE(res.cert.reached_target);
    const auto risk = [&](const Vector& v) {
      return mspp::empirical_risk(prob.obj, prob.batch, v);
    };
    for (int probe = 0; probe < 20; ++probe) {
      const Vector w = prob.center + testio::gaussian_vector(prob.batch.dim(), rng);
      const double lhs = risk(res.w) - risk(w);
      const double rhs = 0.5 * prob.gamma *
                         ((w - prob.center).squaredNorm() - (w - res.w).squaredNorm() -
                          (res.w - prob.center).squaredNorm());
      CHECK(lhs <= rhs + 1e-6);
    }
  }
}

TEST_CASE("inexact solutions stay within the strong-convexity distance bound") {
  mspp::Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const auto prob = random_problem(rng);
    const double epsilon = trial % 2 == 0 ? 1e-4 : 1e-6;
    const auto res = mspp::solve(prob, SolveOptions::certified(epsilon));
    REQUIRE(res.cert.reached_target);
    const Vector reference = testio::reference_minimizer(prob, 200000);
    CHECK((res.w - reference).norm() <= std::sqrt(2.0 * epsilon / prob.gamma) + 1e-8);
  }
}

TEST_CASE("prox-gradient objective is monotone in the iteration count") {
  mspp::Rng rng(59);
  const auto prob = random_problem(rng);
  double prev = mspp::subproblem_value(prob, prob.center);
  for (int iters = 1; iters <= 30; ++iters) {
    SolveOptions opts = SolveOptions::objective_diff(0.0, iters);
    const auto res = mspp::solve(prob, opts);
    CHECK(res.cert.final_objective <= prev + 1e-12);
    prev = res.cert.final_objective;
  }
}

TEST_CASE("paper heuristic stops on objective difference or 1000 iterations") {
  mspp::Rng rng(61);
  const auto prob = random_problem(rng);
  const auto loose = mspp::solve(prob, SolveOptions::objective_diff(1e-3, 1000));
  CHECK(loose.cert.iters_used <= 1000);
  const auto capped = mspp::solve(prob, SolveOptions::objective_diff(0.0, 17));
  CHECK(capped.cert.iters_used == 17);
}

TEST_CASE("certified solve under a ball domain") {
  mspp::Rng rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    auto prob = random_problem(rng);
    prob.obj.domain_radius = 0.3;  // small enough that the constraint binds often
    const auto res = mspp::solve(prob, SolveOptions::certified(1e-12));
    CHECK(res.cert.reached_target);
    CHECK(res.w.norm() <= 0.3 + 1e-9);
    // The certificate still upper-bounds the optimality gap over the ball.
    const Vector reference = testio::reference_minimizer(prob, 300000);
    const double gap = mspp::subproblem_value(prob, res.w) -
                       mspp::subproblem_value(prob, reference);
    CHECK(res.cert.subopt_bound >= gap - 1e-9);
  }
}

TEST_CASE("solver failure is reported, not hidden") {
  // Logistic subproblem with gamma << curvature and a tiny iteration cap:
  // the target cannot be reached and the achieved bound is returned flagged.
  mspp::ProxSubproblem prob;
  prob.obj.loss = mspp::LossKind::logistic;
  prob.batch.samples.push_back(scalar_sample(2.0, 1.0));
  prob.center = Vector::Zero(1);
  prob.gamma = 1e-6;
  SolveOptions opts = SolveOptions::certified(1e-18);
  opts.max_iters_hard = 3;
  const auto res = mspp::solve(prob, opts);
  CHECK_FALSE(res.cert.reached_target);
  CHECK(res.cert.iters_used == 3);
  CHECK(res.cert.subopt_bound > 1e-12);
}

TEST_CASE("identical inputs give bit-identical solves") {
  mspp::Rng rng(71);
  const auto prob = random_problem(rng);
  const auto a = mspp::solve(prob, SolveOptions::certified(1e-10));
  const auto b = mspp::solve(prob, SolveOptions::certified(1e-10));
  CHECK(a.w == b.w);
  CHECK(a.cert.subopt_bound == b.cert.subopt_bound);
  CHECK(a.cert.iters_used == b.cert.iters_used);
}
