#include "mspp/schedules.hpp"

#include <algorithm>

namespace mspp {

double gamma_at(const GammaSchedule& sched, int t) {
  if (t < 1) throw config_error("gamma_at: t must be >= 1");
  switch (sched.kind) {
    case GammaSchedule::Kind::linear_qg:
      return 0.25 * sched.lambda * sched.rho * t;
    case GammaSchedule::Kind::linear_qg_offset:
      return 0.25 * sched.lambda * sched.rho * t + 16.0 * sched.smoothness / sched.n;
    case GammaSchedule::Kind::constant:
      return sched.gamma;
  }
  throw config_error("unknown gamma schedule kind");
}

double tolerance_at(const ToleranceSchedule& sched, int t, int n) {
  if (t < 1 || n < 1) throw config_error("tolerance_at: t and n must be >= 1");
  const double td = static_cast<double>(t);
  const double nd = static_cast<double>(n);
  switch (sched.kind) {
    case ToleranceSchedule::Kind::exact:
      return 0.0;
    case ToleranceSchedule::Kind::poly_qg:
      return sched.eps / (nd * td * td * td * td);
    case ToleranceSchedule::Kind::poly_convex: {
      const double poly = sched.eps / (nd * nd * td * td * td * td * td);
      const double cap =
          2.0 * sched.reg_lipschitz * sched.reg_lipschitz / (9.0 * nd * nd * sched.gamma);
      return std::min(poly, cap);
    }
    case ToleranceSchedule::Kind::fixed:
      return sched.eps;
  }
  throw config_error("unknown tolerance schedule kind");
}

double effective_tolerance(const ToleranceSchedule& sched, int t, int n) {
  return std::max(tolerance_at(sched, t, n), kExactToleranceFloor);
}

}  // namespace mspp
