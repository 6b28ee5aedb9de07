#pragma once

#include "mspp/errors.hpp"

namespace mspp {

// Floor used to realize "exact" inner solves in floating point.
inline constexpr double kExactToleranceFloor = 1e-12;

// Regularization modulus gamma_t:
//   linear_qg        gamma_t = lambda*rho*t/4
//   linear_qg_offset gamma_t = lambda*rho*t/4 + 16*L/n
//   constant         gamma_t = gamma
struct GammaSchedule {
  enum class Kind { linear_qg, linear_qg_offset, constant };

  Kind kind = Kind::constant;
  double lambda = 0.0;
  double rho = 0.0;
  double smoothness = 0.0;
  int n = 0;
  double gamma = 1.0;

  static GammaSchedule linear_qg(double lambda, double rho) {
    if (lambda <= 0) throw config_error("gamma schedule: lambda must be positive");
    if (rho <= 0 || rho > 0.5) throw config_error("gamma schedule: rho must be in (0, 0.5]");
    GammaSchedule s;
    s.kind = Kind::linear_qg;
    s.lambda = lambda;
    s.rho = rho;
    return s;
  }

  static GammaSchedule linear_qg_offset(double lambda, double rho, double smoothness, int n) {
    if (smoothness <= 0 || n < 1) throw config_error("gamma schedule: need L > 0 and n >= 1");
    GammaSchedule s = linear_qg(lambda, rho);
    s.kind = Kind::linear_qg_offset;
    s.smoothness = smoothness;
    s.n = n;
    return s;
  }

  static GammaSchedule constant(double gamma) {
    if (gamma <= 0) throw config_error("gamma schedule: gamma must be positive");
    GammaSchedule s;
    s.kind = Kind::constant;
    s.gamma = gamma;
    return s;
  }
};

double gamma_at(const GammaSchedule& sched, int t);

// Inner-solve tolerance epsilon_t:
//   exact       0 (realized as kExactToleranceFloor by the solver)
//   poly_qg     eps / (n * t^4)
//   poly_convex min{ eps / (n^2 * t^5), 2*G^2 / (9 * n^2 * gamma) }
//   fixed       eps
struct ToleranceSchedule {
  enum class Kind { exact, poly_qg, poly_convex, fixed };

  Kind kind = Kind::exact;
  double eps = 0.0;
  double reg_lipschitz = 0.0;
  double gamma = 1.0;

  static ToleranceSchedule exact() { return {}; }

  static ToleranceSchedule poly_qg(double eps) {
    if (eps < 0 || eps > 1) throw config_error("tolerance schedule: eps must be in [0, 1]");
    ToleranceSchedule s;
    s.kind = Kind::poly_qg;
    s.eps = eps;
    return s;
  }

  static ToleranceSchedule poly_convex(double eps, double reg_lipschitz, double gamma) {
    if (eps < 0 || eps > 1) throw config_error("tolerance schedule: eps must be in [0, 1]");
    if (gamma <= 0) throw config_error("tolerance schedule: gamma must be positive");
    ToleranceSchedule s;
    s.kind = Kind::poly_convex;
    s.eps = eps;
    s.reg_lipschitz = reg_lipschitz;
    s.gamma = gamma;
    return s;
  }

  static ToleranceSchedule fixed(double eps) {
    if (eps < 0) throw config_error("tolerance schedule: eps must be nonnegative");
    ToleranceSchedule s;
    s.kind = Kind::fixed;
    s.eps = eps;
    return s;
  }
};

double tolerance_at(const ToleranceSchedule& sched, int t, int n);

// Solver-facing target: tolerance_at floored at kExactToleranceFloor, since a
// true zero is unattainable on the certified bound.
double effective_tolerance(const ToleranceSchedule& sched, int t, int n);

}  // namespace mspp
