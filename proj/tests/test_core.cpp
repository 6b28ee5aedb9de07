#include <cmath>

#include "doctest.h"
#include "mspp/composite.hpp"
#include "mspp/losses.hpp"
#include "mspp/regularizers.hpp"
#include "mspp/schedules.hpp"
#include "oracles.hpp"

using mspp::LossKind;
using mspp::Regularizer;
using mspp::Sample;
using mspp::Vector;

namespace {

Sample make_sample(std::initializer_list<double> x, double y) {
  Sample z;
  z.x = Vector(static_cast<Eigen::Index>(x.size()));
  Eigen::Index i = 0;
  for (double v : x) z.x[i++] = v;
  z.y = y;
  return z;
}

}  // namespace

TEST_CASE("loss values") {
  CHECK(mspp::loss_value(LossKind::quadratic, Vector::Zero(2), make_sample({1, 1}, 2.0)) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(mspp::loss_value(LossKind::logistic, Vector::Zero(2), make_sample({1, 1}, 1.0)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));

  Vector w(2);
  w << 1, 1;
  CHECK(mspp::loss_value(LossKind::quadratic, w, make_sample({1, 2}, 0.0)) ==
        doctest::Approx(4.5).epsilon(1e-14));

  CHECK_THROWS_AS(mspp::loss_value(LossKind::quadratic, Vector::Zero(3), make_sample({1}, 0.0)),
                  mspp::config_error);
}

TEST_CASE("loss gradients match hand values and finite differences") {
  Vector g = mspp::loss_gradient(LossKind::quadratic, Vector::Zero(2), make_sample({1, 0}, 1.0));
  CHECK(g[0] == doctest::Approx(-1.0));
  CHECK(g[1] == doctest::Approx(0.0));

  g = mspp::loss_gradient(LossKind::logistic, Vector::Zero(2), make_sample({2, 0}, 1.0));
  CHECK(g[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(g[1] == doctest::Approx(0.0));

  mspp::Rng rng(7);
  for (LossKind kind : {LossKind::quadratic, LossKind::logistic}) {
    for (int trial = 0; trial < 20; ++trial) {
      const int p = 1 + rng.next_index(6);
      Sample z;
      z.x = testio::gaussian_vector(p, rng);
      z.y = kind == LossKind::logistic ? (rng.next_double() < 0.5 ? -1.0 : 1.0)
                                       : rng.next_gaussian();
      const Vector w = testio::gaussian_vector(p, rng);
      const Vector analytic = mspp::loss_gradient(kind, w, z);
      const Vector numeric = testio::central_diff_gradient(
          [&](const Vector& v) { return mspp::loss_value(kind, v, z); }, w);
      const double scale = std::max(analytic.norm(), 1e-8);
      CHECK((analytic - numeric).norm() / scale <= 1e-5);
    }
  }
}

TEST_CASE("self-bounding property of smooth nonnegative losses") {
  mspp::Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 1 + rng.next_index(8);
    Sample z;
    z.x = testio::gaussian_vector(p, rng);
    const Vector w = testio::gaussian_vector(p, rng);

    z.y = rng.next_gaussian();
    const double quad_value = mspp::loss_value(LossKind::quadratic, w, z);
    const double quad_grad = mspp::loss_gradient(LossKind::quadratic, w, z).norm();
    const double quad_bound =
        std::sqrt(2.0 * mspp::sample_curvature(LossKind::quadratic, z) * quad_value);
    CHECK(std::abs(quad_grad - quad_bound) <= 1e-12 * std::max(quad_bound, 1e-300));

    z.y = rng.next_double() < 0.5 ? -1.0 : 1.0;
    const double log_value = mspp::loss_value(LossKind::logistic, w, z);
    const double log_grad = mspp::loss_gradient(LossKind::logistic, w, z).norm();
    CHECK(log_grad <=
          std::sqrt(2.0 * mspp::sample_curvature(LossKind::logistic, z) * log_value) + 1e-12);
  }
}

TEST_CASE("losses are convex along random chords") {
  mspp::Rng rng(13);
  for (LossKind kind : {LossKind::quadratic, LossKind::logistic}) {
    for (int trial = 0; trial < 100; ++trial) {
      const int p = 1 + rng.next_index(5);
      Sample z;
      z.x = testio::gaussian_vector(p, rng);
      z.y = kind == LossKind::logistic ? (rng.next_double() < 0.5 ? -1.0 : 1.0)
                                       : rng.next_gaussian();
      const Vector w1 = testio::gaussian_vector(p, rng);
      const Vector w2 = testio::gaussian_vector(p, rng);
      const double theta = rng.next_double();
      const double mix = mspp::loss_value(kind, theta * w1 + (1 - theta) * w2, z);
      const double hull = theta * mspp::loss_value(kind, w1, z) +
                          (1 - theta) * mspp::loss_value(kind, w2, z);
      CHECK(mix <= hull + 1e-12);
    }
  }
}

TEST_CASE("regularizer values") {
  Vector w(3);
  w << 1, -2, 0;
  CHECK(mspp::reg_value(Regularizer::l1(1e-3), w) == doctest::Approx(0.003).epsilon(1e-14));
  CHECK(mspp::reg_value(Regularizer::none(), w) == 0.0);
  Vector v(2);
  v << 3, 4;
  CHECK(mspp::reg_value(Regularizer::l2(2.0), v) == doctest::Approx(25.0).epsilon(1e-14));
}

TEST_CASE("regularizer prox") {
  Vector v(2);
  v << 0.5, -2;
  const Vector u = mspp::reg_prox(Regularizer::l1(1.0), v, 0.25);
  CHECK(u[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(u[1] == doctest::Approx(-1.75).epsilon(1e-14));

  // 1-D grid-search oracle for the prox objective.
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double best = testio::grid_min_1d(
        [&](double x) { return 0.25 * std::abs(x) + 0.5 * (x - v[i]) * (x - v[i]); }, -3.0, 3.0);
    CHECK(std::abs(best - u[i]) <= 1e-4);
  }

  CHECK(mspp::reg_prox(Regularizer::none(), v, 2.0) == v);
  CHECK(mspp::reg_prox(Regularizer::l1(1.0), Vector::Zero(3), 1.0) == Vector::Zero(3));
  CHECK_THROWS_AS(mspp::reg_prox(Regularizer::l1(1.0), v, 0.0), mspp::config_error);
}

TEST_CASE("prox point minimizes the prox objective against perturbations") {
  mspp::Rng rng(17);
  for (const Regularizer& reg :
       {Regularizer::l1(0.7), Regularizer::l2(1.3), Regularizer::none()}) {
    const Vector v = testio::gaussian_vector(6, rng);
    const double eta = 0.5 + rng.next_double();
    const Vector u = mspp::reg_prox(reg, v, eta);
    const double at_u = eta * mspp::reg_value(reg, u) + 0.5 * (u - v).squaredNorm();
    for (int trial = 0; trial < 100; ++trial) {
      Vector delta = testio::gaussian_vector(6, rng);
      delta *= 0.1 * rng.next_double() / delta.norm();
      const Vector probe = u + delta;
      const double at_probe = eta * mspp::reg_value(reg, probe) + 0.5 * (probe - v).squaredNorm();
      CHECK(at_u <= at_probe + 1e-12);
    }
  }
}

TEST_CASE("l1 regularizer is mu*sqrt(p)-Lipschitz") {
  mspp::Rng rng(19);
  const int p = 12;
  const double mu = 0.05;
  const Regularizer reg = Regularizer::l1(mu);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector a = testio::gaussian_vector(p, rng);
    const Vector b = testio::gaussian_vector(p, rng);
    CHECK(std::abs(mspp::reg_value(reg, a) - mspp::reg_value(reg, b)) <=
          mu * std::sqrt(double(p)) * (a - b).norm() + 1e-12);
  }
}

TEST_CASE("empirical risk") {
  mspp::CompositeObjective obj;
  obj.loss = LossKind::quadratic;
  obj.reg = Regularizer::none();

  // Interpolating minimizer of a single-sample problem has zero risk.
  mspp::Minibatch one;
  one.samples.push_back(make_sample({2.0}, 3.0));
  Vector w(1);
  w << 1.5;
  CHECK(mspp::empirical_risk(obj, one, w) == doctest::Approx(0.0).epsilon(1e-14));

  obj.reg = Regularizer::l1(0.1);
  Vector w2(1);
  w2 << -1.0;
  CHECK(mspp::empirical_risk(obj, one, w2) ==
        doctest::Approx(mspp::loss_value(LossKind::quadratic, w2, one.samples[0]) +
                        mspp::reg_value(obj.reg, w2)));

  mspp::Rng rng(23);
  mspp::Minibatch batch;
  for (int i = 0; i < 3; ++i) batch.samples.push_back(make_sample({rng.next_gaussian()}, 1.0));
  Vector w3 = testio::gaussian_vector(1, rng);
  double resummed = 0.0;
  for (const Sample& z : batch.samples) resummed += mspp::loss_value(obj.loss, w3, z);
  resummed = resummed / 3.0 + mspp::reg_value(obj.reg, w3);
  CHECK(mspp::empirical_risk(obj, batch, w3) == doctest::Approx(resummed).epsilon(1e-14));

  mspp::Minibatch empty;
  CHECK_THROWS_AS(mspp::empirical_risk(obj, empty, w3), mspp::config_error);
}

TEST_CASE("gamma schedule values") {
  CHECK(mspp::gamma_at(mspp::GammaSchedule::linear_qg(1.0, 0.5), 1) == doctest::Approx(0.125));
  CHECK(mspp::gamma_at(mspp::GammaSchedule::linear_qg_offset(1.0, 0.5, 1.0, 32), 2) ==
        doctest::Approx(0.75));
  CHECK(mspp::gamma_at(mspp::GammaSchedule::constant(3.0), 17) == doctest::Approx(3.0));
  CHECK_THROWS_AS(mspp::gamma_at(mspp::GammaSchedule::constant(3.0), 0), mspp::config_error);
  CHECK_THROWS_AS(mspp::GammaSchedule::linear_qg(1.0, 0.7), mspp::config_error);
}

TEST_CASE("tolerance schedule values") {
  CHECK(mspp::tolerance_at(mspp::ToleranceSchedule::poly_qg(1.0), 2, 4) ==
        doctest::Approx(1.0 / 64.0).epsilon(1e-14));
  CHECK(mspp::tolerance_at(mspp::ToleranceSchedule::exact(), 5, 3) == 0.0);
  CHECK(mspp::effective_tolerance(mspp::ToleranceSchedule::exact(), 5, 3) <= 1e-12);
  CHECK(mspp::tolerance_at(mspp::ToleranceSchedule::poly_convex(1.0, 1.0, 1.0), 1, 3) ==
        doctest::Approx(2.0 / 81.0).epsilon(1e-14));
  CHECK_THROWS_AS(mspp::tolerance_at(mspp::ToleranceSchedule::poly_qg(1.0), 0, 3),
                  mspp::config_error);
  CHECK_THROWS_AS(mspp::tolerance_at(mspp::ToleranceSchedule::poly_qg(1.0), 1, 0),
                  mspp::config_error);
}

TEST_CASE("schedule monotonicity over t = 1..1000") {
  const auto gamma_lin = mspp::GammaSchedule::linear_qg(2.0, 0.25);
  const auto gamma_off = mspp::GammaSchedule::linear_qg_offset(2.0, 0.25, 3.0, 16);
  const auto tol_qg = mspp::ToleranceSchedule::poly_qg(0.5);
  const auto tol_cvx = mspp::ToleranceSchedule::poly_convex(0.5, 2.0, 1.5);
  double prev_lin = 0.0, prev_off = 0.0;
  double prev_qg = 1e300, prev_cvx = 1e300;
  for (int t = 1; t <= 1000; ++t) {
    CHECK(mspp::gamma_at(gamma_lin, t) >= prev_lin);
    CHECK(mspp::gamma_at(gamma_off, t) >= prev_off);
    CHECK(mspp::tolerance_at(tol_qg, t, 8) <= prev_qg);
    CHECK(mspp::tolerance_at(tol_cvx, t, 8) <= prev_cvx);
    prev_lin = mspp::gamma_at(gamma_lin, t);
    prev_off = mspp::gamma_at(gamma_off, t);
    prev_qg = mspp::tolerance_at(tol_qg, t, 8);
    prev_cvx = mspp::tolerance_at(tol_cvx, t, 8);
    CHECK(prev_lin > 0.0);
    CHECK(prev_qg >= 0.0);
  }
}

TEST_CASE("smoothness bound") {
  std::vector<Sample> one{make_sample({3, 4}, 0.0)};
  CHECK(mspp::smoothness_bound(LossKind::quadratic, one) == doctest::Approx(25.0));
  std::vector<Sample> two{make_sample({2, 0}, 1.0)};
  CHECK(mspp::smoothness_bound(LossKind::logistic, two) == doctest::Approx(1.0));

  mspp::Rng rng(29);
  std::vector<Sample> unit;
  for (int i = 0; i < 5; ++i) {
    Sample z;
    z.x = testio::gaussian_vector(4, rng);
    z.x.normalize();
    unit.push_back(z);
  }
  CHECK(mspp::smoothness_bound(LossKind::quadratic, unit) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(mspp::smoothness_bound(LossKind::quadratic, std::vector<Sample>{}),
                  mspp::config_error);
}

TEST_CASE("ball projection and constrained prox") {
  mspp::Rng rng(31);
  const Vector v = 3.0 * testio::gaussian_vector(5, rng);
  CHECK(mspp::project_to_ball(v, std::nullopt) == v);
  CHECK(mspp::project_to_ball(v, 1.0).norm() == doctest::Approx(1.0).epsilon(1e-12));

  // Constrained l1 prox beats random feasible perturbations.
  const Regularizer reg = Regularizer::l1(0.4);
  const double eta = 0.7;
  const double radius = 1.0;
  const Vector u = mspp::reg_prox_in_ball(reg, v, eta, radius);
  CHECK(u.norm() <= radius + 1e-9);
  const double at_u = eta * mspp::reg_value(reg, u) + 0.5 * (u - v).squaredNorm();
  for (int trial = 0; trial < 200; ++trial) {
    Vector probe = u + 0.2 * testio::gaussian_vector(5, rng);
    probe = mspp::project_to_ball(probe, radius);
    const double at_probe = eta * mspp::reg_value(reg, probe) + 0.5 * (probe - v).squaredNorm();
    CHECK(at_u <= at_probe + 1e-9);
  }
}
