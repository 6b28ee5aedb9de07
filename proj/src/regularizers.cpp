#include "mspp/regularizers.hpp"

#include <cmath>

namespace mspp {

double reg_value(const Regularizer& reg, const Vector& w) {
  switch (reg.kind) {
    case RegKind::none:
      return 0.0;
    case RegKind::l1:
      return reg.mu * w.lpNorm<1>();
    case RegKind::l2:
      return 0.5 * reg.mu * w.squaredNorm();
  }
  throw config_error("unknown regularizer kind");
}

Vector reg_prox(const Regularizer& reg, const Vector& v, double eta) {
  if (eta <= 0) throw config_error("reg_prox: eta must be positive");
  switch (reg.kind) {
    case RegKind::none:
      return v;
    case RegKind::l1: {
      Vector u(v.size());
      const double tau = eta * reg.mu;
      for (Eigen::Index i = 0; i < v.size(); ++i) u[i] = soft_threshold(v[i], tau);
      return u;
    }
    case RegKind::l2:
      return v / (1.0 + eta * reg.mu);
  }
  throw config_error("unknown regularizer kind");
}

Vector project_to_ball(const Vector& v, std::optional<double> radius) {
  if (!radius) return v;
  if (*radius < 0) throw config_error("ball radius must be nonnegative");
  const double norm = v.norm();
  if (norm <= *radius) return v;
  if (*radius == 0.0) return Vector::Zero(v.size());
  return (*radius / norm) * v;
}

Vector reg_prox_in_ball(const Regularizer& reg, const Vector& v, double eta,
                        std::optional<double> radius) {
  if (!radius) return reg_prox(reg, v, eta);
  if (*radius == 0.0) return Vector::Zero(v.size());
  switch (reg.kind) {
    case RegKind::none:
      return project_to_ball(v, radius);
    case RegKind::l2:
      // The unconstrained prox is radial, so projecting it is exact.
      return project_to_ball(v / (1.0 + eta * reg.mu), radius);
    case RegKind::l1: {
      Vector u = reg_prox(reg, v, eta);
      if (u.norm() <= *radius) return u;
      // KKT form: u(theta)_i = soft(v_i/(1+theta), eta*mu/(1+theta)) with the
      // ball multiplier theta >= 0 chosen so ||u(theta)|| = radius. The norm is
      // decreasing in theta; bisect.
      const auto shrunk = [&](double theta) {
        Vector s(v.size());
        const double scale = 1.0 / (1.0 + theta);
        const double tau = eta * reg.mu * scale;
        for (Eigen::Index i = 0; i < v.size(); ++i) s[i] = soft_threshold(v[i] * scale, tau);
        return s;
      };
      double lo = 0.0;
      double hi = v.norm() / *radius;  // ||u(hi)|| <= ||v||/(1+hi) < radius
      for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (shrunk(mid).norm() > *radius) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return shrunk(hi);
    }
  }
  throw config_error("unknown regularizer kind");
}

}  // namespace mspp
